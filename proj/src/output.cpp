#include "vps/output.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "vps/diagnostics.hpp"
#include "vps/energy.hpp"
#include "vps/errors.hpp"

namespace vps {

static_assert(std::endian::native == std::endian::little, "snapshot writer assumes a little-endian host");

std::string num(double x) {
    char buf[40];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) { row(header); }

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw InvalidArgument("csv row has the wrong number of cells");
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) text_ += ',';
        text_ += cells[i];
    }
    text_ += '\n';
}

void CsvWriter::write(const std::string& path) const { write_text(path, text_); }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f << text;
    if (!f) throw IoError("write failed: " + path);
}

void write_timeseries(const std::string& path, const Trajectory& tr, const Model& m) {
    CsvWriter csv(kTimeseriesHeader);
    std::vector<double> edb = edb_residual(tr, m);
    for (size_t n = 0; n < tr.states.size(); ++n) {
        const EnergyBreakdown& e = tr.energies[n];
        csv.row({std::to_string(n), num(tr.times[n]), num(e.total), num(e.gradient_part), num(e.potential_part),
                 num(e.stress_part), num(tr.diss_increments[n]), num(mean(tr.states[n].u)),
                 num(stress_linf(tr.states[n], m)), num(edb[n])});
    }
    csv.write(path);
}

void write_snapshots(const std::string& path, const Trajectory& tr, int every) {
    if (every < 1) throw InvalidArgument("snapshot stride must be positive");
    std::vector<size_t> picks;
    for (size_t n = 0; n < tr.states.size(); n += every) picks.push_back(n);
    if (picks.back() != tr.states.size() - 1) picks.push_back(tr.states.size() - 1);

    const Grid& g = tr.states.front().u.grid();
    nlohmann::ordered_json header;
    header["N"] = g.n_cells();
    header["L"] = g.length();
    header["dt"] = tr.dt;
    header["count"] = picks.size();

    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f << header.dump() << '\n';
    for (size_t n : picks) {
        std::uint64_t step = n;
        f.write(reinterpret_cast<const char*>(&step), sizeof step);
        f.write(reinterpret_cast<const char*>(tr.states[n].u.values().data()), sizeof(double) * g.n_cells());
        f.write(reinterpret_cast<const char*>(tr.states[n].z.values().data()), sizeof(double) * g.n_cells());
    }
    if (!f) throw IoError("write failed: " + path);
}

SnapshotFile read_snapshots(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path);
    std::string line;
    std::getline(f, line);
    SnapshotFile out;
    size_t count = 0;
    try {
        auto h = nlohmann::json::parse(line);
        out.N = h.at("N").get<int>();
        out.L = h.at("L").get<double>();
        out.dt = h.at("dt").get<double>();
        count = h.at("count").get<size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("bad snapshot header: ") + e.what());
    }
    for (size_t i = 0; i < count; ++i) {
        SnapshotRecord r;
        r.u.resize(out.N);
        r.z.resize(out.N);
        f.read(reinterpret_cast<char*>(&r.step), sizeof r.step);
        f.read(reinterpret_cast<char*>(r.u.data()), sizeof(double) * out.N);
        f.read(reinterpret_cast<char*>(r.z.data()), sizeof(double) * out.N);
        if (!f) throw IoError("truncated snapshot file");
        out.records.push_back(std::move(r));
    }
    return out;
}

}  // namespace vps
