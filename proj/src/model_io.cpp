#include "netdetect/model_io.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace netdetect {

namespace {

/// Next meaningful line split into tokens; empty on end of stream.
std::vector<std::string> next_tokens(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<std::string> tokens;
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
        if (tokens.empty() || tokens[0][0] == '#') continue;
        return tokens;
    }
    return {};
}

double parse_double(const std::string& s, const char* what) {
    size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("model file: bad ") + what + " value '" + s + "'");
    }
    if (pos != s.size())
        throw std::invalid_argument(std::string("model file: bad ") + what + " value '" + s + "'");
    return v;
}

int parse_int(const std::string& s, const char* what) {
    double v = parse_double(s, what);
    int i = static_cast<int>(v);
    if (i != v)
        throw std::invalid_argument(std::string("model file: ") + what + " must be an integer");
    return i;
}

}  // namespace

GaussianModel read_model(std::istream& in) {
    auto header = next_tokens(in);
    if (header.size() != 2 || header[0] != "nodes")
        throw std::invalid_argument("model file: expected 'nodes N' header");
    const int n = parse_int(header[1], "node count");
    if (n < 1) throw std::invalid_argument("model file: node count must be >= 1");

    auto mean_line = next_tokens(in);
    if (mean_line.size() != static_cast<size_t>(n) + 1 || mean_line[0] != "mean")
        throw std::invalid_argument("model file: expected 'mean' line with one value per node");
    Eigen::VectorXd mean(n);
    for (int i = 0; i < n; ++i) mean(i) = parse_double(mean_line[i + 1], "mean");

    auto kind = next_tokens(in);
    if (kind.size() == 1 && kind[0] == "cov") {
        Eigen::MatrixXd cov(n, n);
        for (int i = 0; i < n; ++i) {
            auto row = next_tokens(in);
            if (row.size() != static_cast<size_t>(n))
                throw std::invalid_argument("model file: covariance row " + std::to_string(i) +
                                            " needs " + std::to_string(n) + " values");
            for (int j = 0; j < n; ++j) cov(i, j) = parse_double(row[j], "covariance");
        }
        if (!cov.isApprox(cov.transpose(), 1e-12))
            throw std::invalid_argument("model file: covariance is not symmetric");
        return GaussianModel(std::move(mean), std::move(cov));
    }
    if (kind.size() == 1 && kind[0] == "tree") {
        auto var_line = next_tokens(in);
        if (var_line.size() != static_cast<size_t>(n) + 1 || var_line[0] != "variances")
            throw std::invalid_argument(
                "model file: expected 'variances' line with one value per node");
        Eigen::VectorXd variances(n);
        for (int i = 0; i < n; ++i) {
            variances(i) = parse_double(var_line[i + 1], "variance");
            if (variances(i) <= 0.0)
                throw std::invalid_argument("model file: variances must be > 0");
        }
        std::vector<Graph::Edge> edges;
        std::map<Graph::Edge, double> correlations;
        for (auto line = next_tokens(in); !line.empty(); line = next_tokens(in)) {
            if (line.size() != 4 || line[0] != "edge")
                throw std::invalid_argument("model file: expected 'edge i j rho' lines");
            int i = parse_int(line[1], "edge endpoint");
            int j = parse_int(line[2], "edge endpoint");
            if (i < 0 || j < 0 || i >= n || j >= n || i == j)
                throw std::invalid_argument("model file: edge endpoints out of range");
            Graph::Edge e{std::min(i, j), std::max(i, j)};
            edges.push_back(e);
            correlations[e] = parse_double(line[3], "correlation");
        }
        Graph tree(n, edges);
        Eigen::MatrixXd cov = tree_covariance_completion(correlations, tree, variances);
        return GaussianModel(std::move(mean), std::move(cov), std::move(tree));
    }
    throw std::invalid_argument("model file: expected 'cov' or 'tree' section");
}

GaussianModel read_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    try {
        return read_model(in);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

void write_model(std::ostream& out, const GaussianModel& model) {
    const int n = model.node_count();
    char buf[32];
    out << "nodes " << n << "\nmean";
    for (int i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof(buf), " %.17g", model.mean()(i));
        out << buf;
    }
    out << "\ncov\n";
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            std::snprintf(buf, sizeof(buf), j ? " %.17g" : "%.17g", model.covariance()(i, j));
            out << buf;
        }
        out << '\n';
    }
}

void write_model_file(const std::string& path, const GaussianModel& model) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open model file for writing: " + path);
    write_model(out, model);
}

}  // namespace netdetect
