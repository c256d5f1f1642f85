#include "axon/trace_io.hpp"

#include <filesystem>
#include <fstream>

#include <fmt/format.h>

#include "axon/errors.hpp"

namespace axon {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError(fmt::format("cannot write '{}'", path));
  return out;
}

constexpr const char* kPlotScript = R"PY(#!/usr/bin/env python3
"""Plots a simulation written by `axonctl simulate --out <dir>`."""
import csv
import pathlib
import sys

import matplotlib.pyplot as plt

d = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).parent)

with open(d / "trace.csv", newline="", encoding="utf-8") as f:
    rows = list(csv.DictReader(f))
t = [float(r["t"]) / 60 for r in rows]

fig, ax = plt.subplots(2, 2, figsize=(10, 7))
ax[0, 0].plot(t, [float(r["l"]) * 1e6 for r in rows])
ax[0, 0].set(xlabel="t [min]", ylabel="l [um]", title="axon length")
ax[0, 1].plot(t, [float(r["q_s"]) for r in rows])
ax[0, 1].set(xlabel="t [min]", ylabel="q_s [mol/m^4]", title="soma influx")
ax[1, 0].semilogy(t, [max(float(r["h1_tilde"]), 1e-300) for r in rows], label="||u - u_hat||_H1")
ax[1, 0].semilogy(t, [max(float(r["h1_u"]), 1e-300) for r in rows], label="||u||_H1")
ax[1, 0].set(xlabel="t [min]", title="norms")
ax[1, 0].legend()

with open(d / "profiles.csv", newline="", encoding="utf-8") as f:
    snaps = list(csv.DictReader(f))
for s in snaps:
    with open(d / f"profile_{s['index']}.csv", newline="", encoding="utf-8") as f:
        prof = list(csv.DictReader(f))
    x = [float(r["x"]) * 1e6 for r in prof]
    line, = ax[1, 1].plot(x, [float(r["c"]) for r in prof], label=f"t = {float(s['t']) / 60:.2f} min")
    ax[1, 1].plot(x, [float(r["c_hat"]) for r in prof], "--", color=line.get_color())
ax[1, 1].set(xlabel="x [um]", ylabel="c [mol/m^3]", title="c (solid), c_hat (dashed)")
ax[1, 1].legend(fontsize=7)
fig.tight_layout()
fig.savefig(d / "trace.png", dpi=150)
)PY";

}  // namespace

const std::string& trace_header() {
  static const std::string h = "t,l,c_c,y1,y2,U,q_s,h1_u,h1_uhat,h1_tilde,|X|,|X̂|,|X̃|";
  return h;
}

void write_trace_csv(const SimulationTrace& trace, const std::string& path) {
  auto out = open_out(path);
  out << trace_header() << '\n';
  for (const auto& r : trace.rows) {
    out << fmt::format("{:.6f},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}\n",
                       r.t, r.l, r.c_c, r.y1, r.y2, r.U, r.q_s, r.h1_u, r.h1_u_hat, r.h1_u_tilde, r.X, r.X_hat,
                       r.X_tilde);
  }
  if (!out) throw NumericalError(fmt::format("write to '{}' failed", path));
}

void write_profiles(const SimulationTrace& trace, const std::string& dir) {
  std::filesystem::create_directories(dir);
  auto index = open_out((std::filesystem::path(dir) / "profiles.csv").string());
  index << "index,t\n";
  for (std::size_t k = 0; k < trace.snapshots.size(); ++k) {
    const auto& s = trace.snapshots[k];
    index << fmt::format("{},{:.6f}\n", k, s.t);
    auto out = open_out((std::filesystem::path(dir) / fmt::format("profile_{}.csv", k)).string());
    out << "x,c,c_hat,c_eq\n";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      out << fmt::format("{:.12e},{:.12e},{:.12e},{:.12e}\n", s.x[i], s.c[i], s.c_hat[i], s.c_eq[i]);
  }
}

void write_plot_script(const std::string& dir) {
  std::filesystem::create_directories(dir);
  const auto path = (std::filesystem::path(dir) / "plot_trace.py").string();
  auto out = open_out(path);
  out << kPlotScript;
}

}  // namespace axon
