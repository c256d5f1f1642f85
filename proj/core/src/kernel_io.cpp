#include <fstream>

#include <fmt/format.h>

#include "axon/errors.hpp"
#include "axon/kernel.hpp"

namespace axon {

namespace {

constexpr const char* kMagic = "axon-kernel-v1";

const char* kind_name(KernelKind k) { return k == KernelKind::observer ? "P" : "Q"; }

}  // namespace

void save_kernel(const KernelTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError(fmt::format("cannot write kernel table '{}'", path));
  const auto& pr = table.problem();
  out << fmt::format("# {} kind={} l_bar={:.17g} grid_n={} lambda={:.17g} gamma1={:.17g} hash={:016x} depth={}\n",
                     kMagic, kind_name(table.kind()), pr.l_bar, pr.grid_n, pr.lambda, pr.gamma1, pr.hash(),
                     table.truncation_depth);
  // one line per row i, holding j = i..n-1
  for (int i = 0; i < pr.grid_n; ++i) {
    for (int j = i; j < pr.grid_n; ++j) out << fmt::format("{}{:.17g}", j == i ? "" : " ", table.at(i, j));
    out << '\n';
  }
  if (!out) throw NumericalError(fmt::format("write to '{}' failed", path));
}

KernelTable load_kernel(const std::string& path, KernelKind kind, const KernelProblem& expected) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open kernel table '{}'", path));
  std::string header;
  std::getline(in, header);
  const auto want = fmt::format("# {} kind={} l_bar={:.17g} grid_n={} lambda={:.17g} gamma1={:.17g} hash={:016x} ",
                                kMagic, kind_name(kind), expected.l_bar, expected.grid_n, expected.lambda,
                                expected.gamma1, expected.hash());
  if (header.rfind(want, 0) != 0) {
    throw ConfigError(fmt::format("kernel table '{}' does not match the requested problem\n  found:    {}\n  expected: {}...",
                                  path, header, want));
  }
  int depth = 0;
  {
    const auto pos = header.find("depth=");
    if (pos != std::string::npos) depth = std::stoi(header.substr(pos + 6));
  }
  const auto n = static_cast<std::size_t>(expected.grid_n);
  std::vector<double> packed;
  packed.reserve(n * (n + 1) / 2);
  double v = 0;
  while (in >> v) packed.push_back(v);
  if (packed.size() != n * (n + 1) / 2) {
    throw ConfigError(fmt::format("kernel table '{}' has {} samples, expected {}", path, packed.size(), n * (n + 1) / 2));
  }
  KernelTable table(kind, expected, std::move(packed));
  table.truncation_depth = depth;
  return table;
}

}  // namespace axon
