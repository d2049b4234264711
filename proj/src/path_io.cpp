#include "lfsmlab/path_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>
#include <string_view>

#include "lfsmlab/errors.hpp"
#include "text.hpp"

namespace lfsmlab {

namespace {

using detail::append_number;
using detail::parse_number;
using detail::split;

constexpr std::array<char, 4> kMagic{'L', 'F', 'S', 'M'};

std::string describe(const std::filesystem::path& file) { return "'" + file.string() + "'"; }

std::ofstream open_out(const std::filesystem::path& file, std::ios::openmode mode) {
    std::ofstream out(file, mode);
    if (!out) throw std::runtime_error("cannot open " + describe(file) + " for writing");
    return out;
}

std::ifstream open_in(const std::filesystem::path& file, std::ios::openmode mode) {
    std::ifstream in(file, mode);
    if (!in) throw std::runtime_error("cannot open " + describe(file));
    return in;
}

void put_u64(std::ostream& out, std::uint64_t v) {
    std::array<char, 8> b;
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b.data(), 8);
}

void put_u32(std::ostream& out, std::uint32_t v) {
    std::array<char, 4> b;
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b.data(), 4);
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(std::istream& in) {
    std::array<unsigned char, 8> b;
    if (!in.read(reinterpret_cast<char*>(b.data()), 8)) throw FormatError("truncated binary path");
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

std::uint32_t get_u32(std::istream& in) {
    std::array<unsigned char, 4> b;
    if (!in.read(reinterpret_cast<char*>(b.data()), 4)) throw FormatError("truncated binary path");
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

} // namespace

void write_path_csv(const SamplePath& path, const std::filesystem::path& file) {
    auto out = open_out(file, std::ios::out | std::ios::trunc);
    out << "index,time,value\n";
    std::string line;
    for (std::size_t i = 0; i < path.values.size(); ++i) {
        line.clear();
        line += std::to_string(i);
        line += ',';
        append_number(line, static_cast<double>(i) * path.dt);
        line += ',';
        append_number(line, path.values[i]);
        line += '\n';
        out << line;
    }
    if (!out) throw std::runtime_error("write failed for " + describe(file));
}

void write_path_binary(const SamplePath& path, const std::filesystem::path& file) {
    if (path.values.empty()) throw DomainError("cannot write an empty path");
    auto out = open_out(file, std::ios::out | std::ios::trunc | std::ios::binary);
    out.write(kMagic.data(), kMagic.size());
    put_u32(out, kPathFormatVersion);
    put_u64(out, path.values.size() - 1);
    put_f64(out, path.dt);
    put_f64(out, path.spec.hurst);
    put_f64(out, path.spec.alpha);
    put_u64(out, path.grid.seed);
    for (double v : path.values) put_f64(out, v);
    if (!out) throw std::runtime_error("write failed for " + describe(file));
}

SamplePath read_path_binary(const std::filesystem::path& file) {
    auto in = open_in(file, std::ios::in | std::ios::binary);
    std::array<char, 4> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
        throw FormatError(describe(file) + " is not a binary path file");
    }
    const auto version = get_u32(in);
    if (version != kPathFormatVersion) {
        throw FormatError(describe(file) + ": unsupported format version " + std::to_string(version));
    }
    SamplePath path;
    const auto n = get_u64(in);
    path.dt = get_f64(in);
    path.spec.hurst = get_f64(in);
    path.spec.alpha = get_f64(in);
    path.grid.seed = get_u64(in);
    path.grid.n = n;
    path.grid.dt = path.dt;

    in.seekg(0, std::ios::end);
    const auto remaining = static_cast<std::uint64_t>(in.tellg()) - (4 + 4 + 8 * 5);
    if (n == std::numeric_limits<std::uint64_t>::max() || remaining / 8 != n + 1 || remaining % 8 != 0) {
        throw FormatError(describe(file) + ": payload does not match header length");
    }
    in.seekg(4 + 4 + 8 * 5);
    path.values.resize(n + 1);
    for (auto& v : path.values) v = get_f64(in);
    return path;
}

SamplePath read_path_csv(const std::filesystem::path& file) {
    auto in = open_in(file, std::ios::in);
    std::string line;
    SamplePath path;
    std::vector<double> times;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto fields = split(line, ',');
        if (lineno == 1 && fields.size() == 3 && fields[0] == "index") continue;
        double idx = 0, t = 0, v = 0;
        if (fields.size() != 3 || !parse_number(fields[0], idx) || !parse_number(fields[1], t) ||
            !parse_number(fields[2], v)) {
            throw FormatError(describe(file) + ": malformed line " + std::to_string(lineno));
        }
        if (idx != static_cast<double>(path.values.size())) {
            throw FormatError(describe(file) + ": non-consecutive index at line " + std::to_string(lineno));
        }
        times.push_back(t);
        path.values.push_back(v);
    }
    if (path.values.size() < 2) throw FormatError(describe(file) + ": fewer than two samples");
    path.dt = times[1] - times[0];
    if (!(path.dt > 0)) throw FormatError(describe(file) + ": time column is not increasing");
    path.grid.n = path.values.size() - 1;
    path.grid.dt = path.dt;
    return path;
}

SamplePath read_path(const std::filesystem::path& file) {
    std::array<char, 4> magic{};
    {
        auto in = open_in(file, std::ios::in | std::ios::binary);
        in.read(magic.data(), magic.size());
    }
    return magic == kMagic ? read_path_binary(file) : read_path_csv(file);
}

std::vector<double> read_samples(const std::filesystem::path& file) {
    auto in = open_in(file, std::ios::in);
    std::vector<double> out;
    std::string line;
    std::size_t lineno = 0;
    bool seen_data = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto s = detail::trim(line);
        if (s.empty() || s.front() == '#') continue;
        const auto cut = s.find_first_of(",\t ");
        double v = 0;
        if (!parse_number(s.substr(0, cut), v)) {
            if (!seen_data && out.empty()) {
                seen_data = true;
                continue;
            }
            throw FormatError(describe(file) + ": not a number at line " + std::to_string(lineno));
        }
        seen_data = true;
        out.push_back(v);
    }
    return out;
}

} // namespace lfsmlab
