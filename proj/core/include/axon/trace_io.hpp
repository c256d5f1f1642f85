#pragma once

#include <string>

#include "axon/scenario.hpp"

namespace axon {

/// Column header of the trace CSV.
[[nodiscard]] const std::string& trace_header();

void write_trace_csv(const SimulationTrace& trace, const std::string& path);
/// One CSV per snapshot (x, c, c_hat, c_eq), named profile_<index>.csv;
/// also writes profiles.csv listing index and time.
void write_profiles(const SimulationTrace& trace, const std::string& dir);
/// Python/matplotlib stub that plots the trace and profiles in dir.
void write_plot_script(const std::string& dir);

}  // namespace axon
