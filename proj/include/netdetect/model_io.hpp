#ifndef NETDETECT_MODEL_IO_HPP
#define NETDETECT_MODEL_IO_HPP

#include <iosfwd>
#include <string>

#include "netdetect/gaussian.hpp"

namespace netdetect {

/// Plain-text model format. Either a dense covariance:
///
///   nodes 3
///   mean 0 0 0
///   cov
///   1 0.5 0
///   0.5 1 0
///   0 0 1
///
/// or a tree given by per-edge correlations and per-node variances:
///
///   nodes 3
///   mean 0 0 0
///   tree
///   variances 1 1 1
///   edge 0 1 0.5
///   edge 1 2 0.1
///
/// Blank lines and lines starting with '#' are ignored.
GaussianModel read_model(std::istream& in);
GaussianModel read_model_file(const std::string& path);

/// Writes the dense-covariance form (round-trips through read_model).
void write_model(std::ostream& out, const GaussianModel& model);
void write_model_file(const std::string& path, const GaussianModel& model);

}  // namespace netdetect

#endif
