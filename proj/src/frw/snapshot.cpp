#include "frw/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace frw {

namespace {

void write_array(std::ostream& os, const Field& f) {
    if constexpr (std::endian::native == std::endian::little) {
        os.write(reinterpret_cast<const char*>(f.data()),
                 static_cast<std::streamsize>(f.size() * sizeof(double)));
    } else {
        for (double v : f) {
            std::uint64_t bits;
            std::memcpy(&bits, &v, 8);
            char buf[8];
            for (int i = 0; i < 8; ++i)
                buf[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
            os.write(buf, 8);
        }
    }
}

void read_array(std::istream& is, Field& f) {
    if constexpr (std::endian::native == std::endian::little) {
        is.read(reinterpret_cast<char*>(f.data()),
                static_cast<std::streamsize>(f.size() * sizeof(double)));
    } else {
        for (double& v : f) {
            char buf[8];
            is.read(buf, 8);
            std::uint64_t bits = 0;
            for (int i = 0; i < 8; ++i)
                bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i]))
                        << (8 * i);
            std::memcpy(&v, &bits, 8);
        }
    }
    if (!is) throw std::runtime_error("snapshot truncated");
}

}  // namespace

void write_snapshot(const std::string& path, const FluidState& state, double c2) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open snapshot for writing: " + path);
    char header[256];
    std::snprintf(header, sizeof header,
                  "FRWEULER v1 %lld %lld %lld %.17g %.17g %.17g %.17g %.17g\n",
                  static_cast<long long>(state.grid.dims[0]),
                  static_cast<long long>(state.grid.dims[1]),
                  static_cast<long long>(state.grid.dims[2]),
                  state.grid.lengths[0], state.grid.lengths[1], state.grid.lengths[2],
                  state.t, c2);
    os << header;
    write_array(os, state.L);
    for (const auto& comp : state.u) write_array(os, comp);
    if (!os) throw std::runtime_error("snapshot write failed: " + path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open snapshot: " + path);
    std::string line;
    std::getline(is, line);
    std::istringstream hs(line);
    std::string magic, version;
    long long n1, n2, n3;
    double l1, l2, l3, t, c2;
    if (!(hs >> magic >> version >> n1 >> n2 >> n3 >> l1 >> l2 >> l3 >> t >> c2) ||
        magic != "FRWEULER" || version != "v1")
        throw std::runtime_error("not a FRWEULER v1 snapshot: " + path);
    Snapshot snap;
    snap.c2 = c2;
    snap.state.grid = make_grid({n1, n2, n3}, {l1, l2, l3});
    snap.state.t = t;
    snap.state.L = make_field(snap.state.grid);
    for (auto& comp : snap.state.u) comp = make_field(snap.state.grid);
    read_array(is, snap.state.L);
    for (auto& comp : snap.state.u) read_array(is, comp);
    return snap;
}

}  // namespace frw
