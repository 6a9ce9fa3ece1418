#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vps/material.hpp"
#include "vps/stepper.hpp"

namespace vps {

/// Writes rows of already formatted cells; header first.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    void row(const std::vector<std::string>& cells);
    void write(const std::string& path) const;
    const std::string& text() const { return text_; }

private:
    size_t columns_;
    std::string text_;
};

/// Shortest round-trip decimal for a double.
std::string num(double x);

inline const std::vector<std::string> kTimeseriesHeader = {
    "step", "t", "energy_total", "energy_gradient", "energy_potential", "energy_stress",
    "dissipation_increment", "mass", "stress_linf", "edb_residual"};

void write_timeseries(const std::string& path, const Trajectory& traj, const Model& model);

/// JSON header line {N, L, dt, count}, then per record: u64 LE step, N f64 LE u, N f64 LE z.
void write_snapshots(const std::string& path, const Trajectory& traj, int every = 1);

struct SnapshotRecord {
    std::uint64_t step;
    std::vector<double> u, z;
};
struct SnapshotFile {
    int N = 0;
    double L = 0.0, dt = 0.0;
    std::vector<SnapshotRecord> records;
};
SnapshotFile read_snapshots(const std::string& path);

void write_text(const std::string& path, const std::string& text);

}  // namespace vps
