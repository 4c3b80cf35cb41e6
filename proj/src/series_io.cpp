#include "hseom/series_io.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace hseom {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

bool is_spectral(SeriesKind kind) {
    return kind == SeriesKind::SpectrumC || kind == SeriesKind::SpectrumA ||
           kind == SeriesKind::FDTRatio;
}

const char* kind_name(SeriesKind kind) {
    switch (kind) {
    case SeriesKind::LoschmidtEcho: return "loschmidt_echo";
    case SeriesKind::Population: return "population";
    case SeriesKind::CorrelatorA: return "correlator_A";
    case SeriesKind::CorrelatorC: return "correlator_C";
    case SeriesKind::CorrelatorD: return "correlator_D";
    case SeriesKind::CorrelatorRaw: return "correlator_raw";
    case SeriesKind::SpectrumC: return "spectrum_C";
    case SeriesKind::SpectrumA: return "spectrum_A";
    case SeriesKind::FDTRatio: return "fdt_ratio";
    case SeriesKind::TraceHealth: return "trace_health";
    }
    return "unknown";
}

} // namespace

std::string series_to_csv(const ObservableSeries& series) {
    std::string out = is_spectral(series.kind) ? "omega,re,im\n" : "t,re,im\n";
    for (std::size_t i = 0; i < series.grid.size(); ++i) {
        out += format_double(series.grid[i]);
        out += ',';
        out += format_double(series.values[i].real());
        out += ',';
        out += format_double(series.values[i].imag());
        out += '\n';
    }
    return out;
}

void write_series_csv(const ObservableSeries& series,
                      const std::filesystem::path& csv_path,
                      const std::string& config_hash) {
    {
        std::ofstream f(csv_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + csv_path.string());
        f << series_to_csv(series);
    }
    nlohmann::json meta;
    meta["kind"] = kind_name(series.kind);
    meta["name"] = series.name;
    meta["config_hash"] = config_hash;
    meta["points"] = series.grid.size();
    for (const auto& [k, v] : series.meta) meta["params"][k] = v;
    std::filesystem::path side = csv_path;
    side.replace_extension(".meta.json");
    std::ofstream f(side, std::ios::binary);
    f << meta.dump(2) << '\n';
}

} // namespace hseom
