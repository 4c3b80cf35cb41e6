#include "hseom/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace hseom {

namespace {

constexpr char magic[8] = {'H', 'S', 'E', 'O', 'M', 'C', 'K', 'P'};
constexpr uint32_t format_version = 1;

template <typename T>
void put(std::ofstream& f, T v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& f) {
    T v{};
    f.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!f) throw std::runtime_error("checkpoint: truncated file");
    return v;
}

void put_string(std::ofstream& f, const std::string& s) {
    put<uint32_t>(f, static_cast<uint32_t>(s.size()));
    f.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::ifstream& f) {
    const auto len = get<uint32_t>(f);
    std::string s(len, '\0');
    f.read(s.data(), len);
    if (!f) throw std::runtime_error("checkpoint: truncated file");
    return s;
}

} // namespace

void write_checkpoint(const Checkpoint& ckp, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("checkpoint: cannot open " + path.string());
    f.write(magic, sizeof(magic));
    put<uint32_t>(f, format_version);
    put<uint64_t>(f, ckp.config_hash);
    put<uint32_t>(f, ckp.component_index);
    put<uint32_t>(f, ckp.component_total);
    put<uint64_t>(f, ckp.step);
    put<double>(f, ckp.state.time);
    put<uint64_t>(f, ckp.state.n_elems);
    put<uint64_t>(f, ckp.state.dim);
    f.write(reinterpret_cast<const char*>(ckp.state.phi.data()),
            static_cast<std::streamsize>(ckp.state.phi.size() * sizeof(cplx)));
    f.write(reinterpret_cast<const char*>(ckp.state.psi.data()),
            static_cast<std::streamsize>(ckp.state.psi.size() * sizeof(cplx)));
    put<uint32_t>(f, static_cast<uint32_t>(ckp.recorded.size()));
    for (const auto& s : ckp.recorded) {
        put<uint32_t>(f, static_cast<uint32_t>(s.kind));
        put_string(f, s.name);
        put<uint64_t>(f, s.grid.size());
        for (std::size_t i = 0; i < s.grid.size(); ++i) {
            put<double>(f, s.grid[i]);
            put<double>(f, s.values[i].real());
            put<double>(f, s.values[i].imag());
        }
        put<uint32_t>(f, static_cast<uint32_t>(s.meta.size()));
        for (const auto& [k, v] : s.meta) {
            put_string(f, k);
            put_string(f, v);
        }
    }
    if (!f) throw std::runtime_error("checkpoint: write failed");
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("checkpoint: cannot open " + path.string());
    char m[8];
    f.read(m, sizeof(m));
    if (!f || std::memcmp(m, magic, sizeof(magic)) != 0)
        throw std::runtime_error("checkpoint: bad magic");
    const auto ver = get<uint32_t>(f);
    if (ver != format_version)
        throw std::runtime_error("checkpoint: unsupported format version " +
                                 std::to_string(ver));
    Checkpoint ckp;
    ckp.config_hash = get<uint64_t>(f);
    ckp.component_index = get<uint32_t>(f);
    ckp.component_total = get<uint32_t>(f);
    ckp.step = get<uint64_t>(f);
    ckp.state.time = get<double>(f);
    ckp.state.n_elems = get<uint64_t>(f);
    ckp.state.dim = get<uint64_t>(f);
    const std::size_t total = ckp.state.n_elems * ckp.state.dim;
    ckp.state.phi.resize(total);
    ckp.state.psi.resize(total);
    f.read(reinterpret_cast<char*>(ckp.state.phi.data()),
           static_cast<std::streamsize>(total * sizeof(cplx)));
    f.read(reinterpret_cast<char*>(ckp.state.psi.data()),
           static_cast<std::streamsize>(total * sizeof(cplx)));
    if (!f) throw std::runtime_error("checkpoint: truncated amplitude block");
    const auto n_series = get<uint32_t>(f);
    for (uint32_t s = 0; s < n_series; ++s) {
        ObservableSeries ser;
        ser.kind = static_cast<SeriesKind>(get<uint32_t>(f));
        ser.name = get_string(f);
        const auto points = get<uint64_t>(f);
        ser.grid.resize(points);
        ser.values.resize(points);
        for (uint64_t i = 0; i < points; ++i) {
            ser.grid[i] = get<double>(f);
            const double re = get<double>(f);
            const double im = get<double>(f);
            ser.values[i] = {re, im};
        }
        const auto n_meta = get<uint32_t>(f);
        for (uint32_t k = 0; k < n_meta; ++k) {
            auto key = get_string(f);
            ser.meta[key] = get_string(f);
        }
        ckp.recorded.push_back(std::move(ser));
    }
    return ckp;
}

} // namespace hseom
