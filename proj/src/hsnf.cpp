#include "heisenfft/hsnf.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace heisenfft {

namespace {

constexpr char kMagic[6] = {'H', 'S', 'N', 'F', '1', '\n'};

void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& os, double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((u >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw std::runtime_error("HSNF: truncated header");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
}

double get_f64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) throw std::runtime_error("HSNF: truncated payload");
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &u, 8);
    return v;
}

struct Header {
    std::uint32_t n, N, M;
    double L, T_len;
};

void write_header(std::ostream& os, const Header& h) {
    os.write(kMagic, 6);
    put_u32(os, h.n);
    put_u32(os, h.N);
    put_f64(os, h.L);
    put_u32(os, h.M);
    put_f64(os, h.T_len);
}

Header read_header(std::istream& is) {
    char magic[6];
    is.read(magic, 6);
    if (!is || std::memcmp(magic, kMagic, 6) != 0)
        throw std::runtime_error("HSNF: bad magic");
    Header h;
    h.n = get_u32(is);
    h.N = get_u32(is);
    h.L = get_f64(is);
    h.M = get_u32(is);
    h.T_len = get_f64(is);
    return h;
}

void write_values(std::ostream& os, const std::vector<cplx>& v) {
    for (const cplx& z : v) {
        put_f64(os, z.real());
        put_f64(os, z.imag());
    }
}

void read_values(std::istream& is, std::vector<cplx>& v) {
    for (cplx& z : v) {
        const double re = get_f64(is);
        const double im = get_f64(is);
        z = cplx(re, im);
    }
}

} // namespace

void write_hsnf(std::ostream& os, const Slice2N& slice) {
    write_header(os, {slice.grid.n(), slice.grid.points_per_axis(), 0u,
                      slice.grid.extent(), 0.0});
    write_values(os, slice.values);
}

void write_hsnf(std::ostream& os, const HeisenbergSample& sample) {
    write_header(os, {sample.grid.n(), sample.grid.points_per_axis(),
                      sample.axis.points(), sample.grid.extent(), sample.axis.extent()});
    write_values(os, sample.values);
}

bool hsnf_is_slice(std::istream& is) {
    const auto pos = is.tellg();
    const Header h = read_header(is);
    is.seekg(pos);
    return h.M == 0;
}

Slice2N read_hsnf_slice(std::istream& is) {
    const Header h = read_header(is);
    if (h.M != 0) throw std::runtime_error("HSNF: stream holds a sample, not a slice");
    Slice2N out(SpatialGrid(h.n, h.L, h.N));
    read_values(is, out.values);
    return out;
}

HeisenbergSample read_hsnf_sample(std::istream& is) {
    const Header h = read_header(is);
    if (h.M == 0) throw std::runtime_error("HSNF: stream holds a slice, not a sample");
    HeisenbergSample out(SpatialGrid(h.n, h.L, h.N), CentralAxis(h.T_len, h.M));
    read_values(is, out.values);
    return out;
}

namespace {
std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("HSNF: cannot open for writing: " + path);
    return os;
}
std::ifstream open_in(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("HSNF: cannot open for reading: " + path);
    return is;
}
} // namespace

void write_hsnf_file(const std::string& path, const Slice2N& slice) {
    auto os = open_out(path);
    write_hsnf(os, slice);
}
void write_hsnf_file(const std::string& path, const HeisenbergSample& sample) {
    auto os = open_out(path);
    write_hsnf(os, sample);
}
Slice2N read_hsnf_slice_file(const std::string& path) {
    auto is = open_in(path);
    return read_hsnf_slice(is);
}
HeisenbergSample read_hsnf_sample_file(const std::string& path) {
    auto is = open_in(path);
    return read_hsnf_sample(is);
}

} // namespace heisenfft
