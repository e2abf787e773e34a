#ifndef KELAB_GRID_FIELD_HPP
#define KELAB_GRID_FIELD_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace kelab {

/// Flat row-major scalar field over the cell index space of a chart.
/// dims holds the cell count per axis (2 axes for one complex dimension,
/// 4 axes for two).
struct GridField {
  std::vector<int> dims;
  std::vector<double> v;

  GridField() = default;
  explicit GridField(std::vector<int> d, double fill = 0.0)
      : dims(std::move(d)) {
    std::size_t n = 1;
    for (int k : dims) {
      if (k <= 0) throw std::invalid_argument("GridField: nonpositive dim");
      n *= static_cast<std::size_t>(k);
    }
    v.assign(n, fill);
  }

  std::size_t size() const { return v.size(); }
  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }

  bool same_shape(const GridField& o) const { return dims == o.dims; }
};

using ComplexField = std::vector<std::complex<double>>;

/// Compensated (Kahan) summation; fixed left-to-right order so results are
/// reproducible bit-for-bit.
double kahan_sum(std::span<const double> x);

/// Kahan sum of the elementwise product a[i]*b[i].
double kahan_dot(std::span<const double> a, std::span<const double> b);

double sup_norm(std::span<const double> x);

/// Deterministic RNG: the distribution mapping is spelled out here instead of
/// relying on the implementation-defined std:: distributions.
struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next_u64() {
    // splitmix64
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  /// uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  int uniform_int(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }
};

}  // namespace kelab

#endif
