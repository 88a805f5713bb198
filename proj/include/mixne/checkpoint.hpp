#pragma once

// Text checkpoint for a network:
//
//   mixne-mlp 1
//   layer_sizes <n> <s0> <s1> ... <s_{n-1}>
//   hidden <identity|tanh|relu>
//   output <identity|tanh|relu>
//   parameters <count>
//   <one value per line, %.17g, canonical flat order>
//
// Values round-trip exactly through strtod.

#include <iosfwd>
#include <string>

#include "mixne/mlp.hpp"

namespace mixne {

void save_mlp(const MlpParams& params, std::ostream& out);
/// Throws std::runtime_error on a malformed stream.
MlpParams load_mlp(std::istream& in);

void save_mlp_file(const MlpParams& params, const std::string& path);
MlpParams load_mlp_file(const std::string& path);

}  // namespace mixne
