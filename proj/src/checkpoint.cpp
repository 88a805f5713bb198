#include "mixne/checkpoint.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

namespace mixne {

namespace {

void expect_token(std::istream& in, const std::string& expected) {
  std::string token;
  if (!(in >> token) || token != expected) {
    throw std::runtime_error("checkpoint: expected '" + expected + "', got '" + token + "'");
  }
}

}  // namespace

void save_mlp(const MlpParams& params, std::ostream& out) {
  out << "mixne-mlp 1\n";
  out << "layer_sizes " << params.layer_sizes().size();
  for (int s : params.layer_sizes()) out << ' ' << s;
  out << "\nhidden " << to_string(params.hidden_activation()) << '\n';
  out << "output " << to_string(params.output_activation()) << '\n';
  out << "parameters " << params.parameter_count() << '\n';
  for (Eigen::Index i = 0; i < params.values().size(); ++i) {
    out << fmt::format("{:.17g}\n", params.values()[i]);
  }
}

MlpParams load_mlp(std::istream& in) {
  expect_token(in, "mixne-mlp");
  int version = 0;
  if (!(in >> version) || version != 1) throw std::runtime_error("checkpoint: unsupported version");
  expect_token(in, "layer_sizes");
  std::size_t n = 0;
  if (!(in >> n) || n < 2) throw std::runtime_error("checkpoint: bad layer count");
  std::vector<int> sizes(n);
  for (auto& s : sizes) {
    if (!(in >> s)) throw std::runtime_error("checkpoint: bad layer size");
  }
  std::string hidden;
  std::string output;
  expect_token(in, "hidden");
  in >> hidden;
  expect_token(in, "output");
  in >> output;
  MlpParams params(sizes, activation_from_string(hidden), activation_from_string(output));
  expect_token(in, "parameters");
  std::size_t count = 0;
  if (!(in >> count) || count != params.parameter_count()) {
    throw std::runtime_error("checkpoint: parameter count does not match layer sizes");
  }
  std::string token;
  for (std::size_t i = 0; i < count; ++i) {
    if (!(in >> token)) throw std::runtime_error("checkpoint: truncated parameter list");
    params.values()[static_cast<Eigen::Index>(i)] = std::stod(token);
  }
  return params;
}

void save_mlp_file(const MlpParams& params, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  save_mlp(params, out);
}

MlpParams load_mlp_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_mlp(in);
}

}  // namespace mixne
