#include "obswave/cache.hpp"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace obswave {
namespace {

struct Fnv {
  uint64_t h = 0xcbf29ce484222325ull;
  void bytes(const void* p, size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 0x100000001b3ull;
    }
  }
  void f64(double v) { bytes(&v, sizeof v); }
  void i32(int32_t v) { bytes(&v, sizeof v); }
};

constexpr char kMagic[4] = {'O', 'B', 'W', 'M'};
constexpr int32_t kVersion = 1;

uint64_t payloadChecksum(const MassMatrix& m) {
  Fnv f;
  f.bytes(m.m.data(), sizeof(double) * m.m.size());
  f.bytes(m.provenance.data(), m.provenance.size());
  return f.h;
}

}  // namespace

uint64_t massMatrixKey(const SpectralBasis& basis, const Region& region, int first, int last,
                       const QuadratureSpec& quad) {
  Fnv f;
  const auto& m = basis.manifold();
  f.i32((int32_t)m.kind);
  f.f64(m.periods[0]);
  f.f64(m.periods[1]);
  f.f64(basis.lambdaMax());
  f.i32((int32_t)region.topology());
  for (const auto& prim : region.primitives()) {
    f.i32((int32_t)prim.index());
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, CircleArc>) {
            f.f64(p.a);
            f.f64(p.len);
          } else if constexpr (std::is_same_v<T, TorusRect>) {
            f.f64(p.x0); f.f64(p.y0); f.f64(p.x1); f.f64(p.y1);
          } else if constexpr (std::is_same_v<T, TorusTriangle>) {
            for (const auto& v : p.v) { f.f64(v[0]); f.f64(v[1]); }
          } else if constexpr (std::is_same_v<T, SphereCap>) {
            f.f64(p.theta0);
            for (double c : p.axis) f.f64(c);
          } else {
            f.f64(p.theta0); f.f64(p.theta1);
            for (double c : p.axis) f.f64(c);
          }
        },
        prim);
  }
  f.i32(first);
  f.i32(last);
  f.i32(quad.thetaOrder);
  f.i32(quad.phiOrder);
  return f.h;
}

std::string cacheDirectory() {
  if (const char* env = std::getenv("OBSWAVE_CACHE_DIR"); env && *env) return env;
  return ".obswave-cache";
}

MassMatrix cachedMassMatrix(const SpectralBasis& basis, const Region& region, int first,
                            int last, const QuadratureSpec& quad, std::ostream* warn) {
  uint64_t key = massMatrixKey(basis, region, first, last, quad);
  std::filesystem::path dir = cacheDirectory();
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.obwm", (unsigned long long)key);
  std::filesystem::path file = dir / name;

  if (std::ifstream in(file, std::ios::binary); in) {
    char magic[4];
    int32_t version = 0, f = 0, l = 0;
    uint64_t fileKey = 0, checksum = 0;
    uint32_t provLen = 0;
    MassMatrix m;
    bool ok = in.read(magic, 4) && std::memcmp(magic, kMagic, 4) == 0 &&
              in.read(reinterpret_cast<char*>(&version), 4) && version == kVersion &&
              in.read(reinterpret_cast<char*>(&fileKey), 8) && fileKey == key &&
              in.read(reinterpret_cast<char*>(&f), 4) &&
              in.read(reinterpret_cast<char*>(&l), 4) && f == first && l == last &&
              in.read(reinterpret_cast<char*>(&checksum), 8) &&
              in.read(reinterpret_cast<char*>(&provLen), 4) && provLen < 256;
    if (ok) {
      m.first = f;
      m.last = l;
      m.provenance.resize(provLen);
      int n = last - first;
      m.m.resize(n, n);
      ok = in.read(m.provenance.data(), provLen) &&
           in.read(reinterpret_cast<char*>(m.m.data()), sizeof(double) * n * n) &&
           payloadChecksum(m) == checksum;
    }
    if (ok) return m;
    if (warn) *warn << "warning: cache entry " << file.string() << " is corrupt; recomputing\n";
  }

  MassMatrix m = massMatrix(basis, region, first, last, quad);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (std::ofstream out(file, std::ios::binary | std::ios::trunc); out) {
    uint64_t checksum = payloadChecksum(m);
    uint32_t provLen = (uint32_t)m.provenance.size();
    int32_t f = m.first, l = m.last;
    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(&kVersion), 4);
    out.write(reinterpret_cast<const char*>(&key), 8);
    out.write(reinterpret_cast<const char*>(&f), 4);
    out.write(reinterpret_cast<const char*>(&l), 4);
    out.write(reinterpret_cast<const char*>(&checksum), 8);
    out.write(reinterpret_cast<const char*>(&provLen), 4);
    out.write(m.provenance.data(), provLen);
    out.write(reinterpret_cast<const char*>(m.m.data()), sizeof(double) * m.m.size());
  } else if (warn) {
    *warn << "warning: cache directory " << dir.string() << " is not writable\n";
  }
  return m;
}

}  // namespace obswave
