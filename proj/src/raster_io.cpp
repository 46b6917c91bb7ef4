#include "robust_lrt/raster_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "robust_lrt/error.hpp"

namespace robust_lrt {

namespace {

static_assert(std::endian::native == std::endian::little, "raster I/O assumes a little-endian host");

constexpr std::array<char, 4> magic = {'R', 'L', 'R', 'T'};

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open " + path.string());
    return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw input_error("cannot write " + path.string());
    return out;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

bool parse_double(std::string_view text, double& out) {
    const auto s = trim(text);
    if (s.empty()) return false;
    const char* first = s.data();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

void validate_intensity(double x, const std::filesystem::path& path) {
    if (!(x >= 0.0 && x <= 1.0)) {
        std::ostringstream msg;
        msg << path.string() << ": intensity " << x << " outside [0, 1]";
        throw input_error(msg.str());
    }
}

} // namespace

void write_raster(const std::filesystem::path& path, const Raster& raster) {
    auto out = open_out(path);
    const auto w = static_cast<std::uint32_t>(raster.width);
    const auto h = static_cast<std::uint32_t>(raster.height);
    out.write(magic.data(), magic.size());
    out.write(reinterpret_cast<const char*>(&w), sizeof w);
    out.write(reinterpret_cast<const char*>(&h), sizeof h);
    out.write(reinterpret_cast<const char*>(raster.pixels.data()),
              static_cast<std::streamsize>(raster.pixels.size() * sizeof(float)));
    if (!out) throw input_error("failed writing " + path.string());
}

Raster read_raster_binary(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::array<char, 4> head{};
    std::uint32_t w = 0, h = 0;
    in.read(head.data(), head.size());
    in.read(reinterpret_cast<char*>(&w), sizeof w);
    in.read(reinterpret_cast<char*>(&h), sizeof h);
    if (!in || head != magic) throw input_error(path.string() + ": not an RLRT raster");
    if (w == 0 || h == 0) throw input_error(path.string() + ": empty raster");
    Raster r(w, h);
    in.read(reinterpret_cast<char*>(r.pixels.data()), static_cast<std::streamsize>(r.pixels.size() * sizeof(float)));
    if (!in) throw input_error(path.string() + ": truncated raster data");
    for (float x: r.pixels) validate_intensity(x, path);
    return r;
}

Raster read_raster_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    Raster r;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::size_t cols = 0;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            double x;
            if (!parse_double(cell, x)) throw input_error(path.string() + ": bad raster value '" + cell + "'");
            validate_intensity(x, path);
            r.pixels.push_back(static_cast<float>(x));
            ++cols;
        }
        if (r.height == 0) r.width = cols;
        else if (cols != r.width) throw input_error(path.string() + ": ragged raster rows");
        ++r.height;
    }
    if (r.pixels.empty()) throw input_error(path.string() + ": empty raster");
    return r;
}

void write_raster_csv(const std::filesystem::path& path, const Raster& raster) {
    auto out = open_out(path);
    out.precision(9);
    for (std::size_t j = 0; j < raster.height; ++j) {
        for (std::size_t i = 0; i < raster.width; ++i) {
            if (i) out << ',';
            out << raster.at(i, j);
        }
        out << '\n';
    }
}

Raster read_raster(const std::filesystem::path& path) {
    std::array<char, 4> head{};
    {
        auto in = open_in(path);
        in.read(head.data(), head.size());
    }
    return head == magic ? read_raster_binary(path) : read_raster_csv(path);
}

void write_mask_pgm(const std::filesystem::path& path, const BinaryMask& mask) {
    auto out = open_out(path);
    out << "P5\n" << mask.width << ' ' << mask.height << "\n1\n";
    out.write(reinterpret_cast<const char*>(mask.bits.data()), static_cast<std::streamsize>(mask.bits.size()));
    if (!out) throw input_error("failed writing " + path.string());
}

BinaryMask read_mask_pgm(const std::filesystem::path& path) {
    auto in = open_in(path);
    auto token = [&]() {
        std::string t;
        while (in >> t) {
            if (t[0] != '#') return t;
            std::string rest;
            std::getline(in, rest);
        }
        throw input_error(path.string() + ": truncated PGM header");
    };
    if (token() != "P5") throw input_error(path.string() + ": not a binary PGM (P5)");
    std::size_t w = 0, h = 0, maxval = 0;
    try {
        w = std::stoul(token());
        h = std::stoul(token());
        maxval = std::stoul(token());
    }
    catch (const std::logic_error&) {
        throw input_error(path.string() + ": bad PGM header");
    }
    if (w == 0 || h == 0 || maxval == 0 || maxval > 255) throw input_error(path.string() + ": unsupported PGM");
    in.get();
    BinaryMask mask(w, h);
    in.read(reinterpret_cast<char*>(mask.bits.data()), static_cast<std::streamsize>(mask.bits.size()));
    if (!in) throw input_error(path.string() + ": truncated PGM data");
    for (auto& b: mask.bits) b = 2u * b >= maxval ? 1 : 0;
    return mask;
}

std::vector<double> read_column_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::vector<double> out;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        const auto s = trim(line);
        if (s.empty()) continue;
        double x;
        if (!parse_double(s, x)) {
            if (first) {
                first = false;
                continue;
            }
            throw input_error(path.string() + ": bad value '" + s + "'");
        }
        first = false;
        out.push_back(x);
    }
    return out;
}

void write_column_csv(const std::filesystem::path& path, const std::vector<double>& values, const char* header) {
    auto out = open_out(path);
    out.precision(17);
    if (header) out << header << '\n';
    for (double v: values) out << v << '\n';
}

} // namespace robust_lrt
