#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace edgescale {

// A bundle of vertically scalable resources on one node. CPU is in shares
// (relative scheduler weight units), memory in units of 16 MiB. Components
// are never negative; arithmetic that would produce a negative component
// throws instead of clamping so accounting bugs surface immediately.
struct ResourceVector {
  std::int64_t cpu = 0;
  std::int64_t mem = 0;

  constexpr bool operator==(const ResourceVector&) const = default;

  // componentwise >=, used for "free pool covers the request" checks
  constexpr bool covers(const ResourceVector& o) const {
    return cpu >= o.cpu && mem >= o.mem;
  }

  constexpr bool is_zero() const { return cpu == 0 && mem == 0; }
  constexpr bool strictly_positive() const { return cpu > 0 && mem > 0; }

  ResourceVector& operator+=(const ResourceVector& o) {
    cpu += o.cpu;
    mem += o.mem;
    return *this;
  }

  ResourceVector& operator-=(const ResourceVector& o) {
    if (o.cpu > cpu || o.mem > mem) {
      throw std::underflow_error(
          "ResourceVector subtraction below zero: (" + std::to_string(cpu) +
          "," + std::to_string(mem) + ") - (" + std::to_string(o.cpu) + "," +
          std::to_string(o.mem) + ")");
    }
    cpu -= o.cpu;
    mem -= o.mem;
    return *this;
  }

  friend ResourceVector operator+(ResourceVector a, const ResourceVector& b) {
    a += b;
    return a;
  }

  friend ResourceVector operator-(ResourceVector a, const ResourceVector& b) {
    a -= b;
    return a;
  }

  friend std::ostream& operator<<(std::ostream& os, const ResourceVector& v) {
    return os << "(" << v.cpu << "," << v.mem << ")";
  }
};

constexpr ResourceVector component_min(const ResourceVector& a,
                                       const ResourceVector& b) {
  return {a.cpu < b.cpu ? a.cpu : b.cpu, a.mem < b.mem ? a.mem : b.mem};
}

constexpr ResourceVector component_max(const ResourceVector& a,
                                       const ResourceVector& b) {
  return {a.cpu > b.cpu ? a.cpu : b.cpu, a.mem > b.mem ? a.mem : b.mem};
}

// componentwise ceil(v * factor); factor must be non-negative
inline ResourceVector scale_ceil(const ResourceVector& v, double factor) {
  if (factor < 0) {
    throw std::invalid_argument("scale_ceil: negative factor");
  }
  return {static_cast<std::int64_t>(std::ceil(static_cast<double>(v.cpu) * factor)),
          static_cast<std::int64_t>(std::ceil(static_cast<double>(v.mem) * factor))};
}

inline ResourceVector component_mul(const ResourceVector& v, std::int64_t k) {
  return {v.cpu * k, v.mem * k};
}

inline ResourceVector component_div_floor(const ResourceVector& v,
                                          std::int64_t k) {
  if (k <= 0) {
    throw std::invalid_argument("component_div_floor: divisor must be > 0");
  }
  return {v.cpu / k, v.mem / k};
}

}  // namespace edgescale
