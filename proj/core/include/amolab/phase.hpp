#pragma once

#include <string>

namespace amolab {

// Phase descriptor for theta.  Exact form encodes theta = (m*alpha + l)/2,
// covering the completely resonant phases 2*theta in alpha*Z + Z.
struct Phase {
  enum class Kind { Exact, Real };
  Kind kind = Kind::Real;
  long long m = 0;
  long long l = 0;
  double real_value = 0.0;

  static Phase exact(long long m, long long l) {
    Phase p;
    p.kind = Kind::Exact;
    p.m = m;
    p.l = l;
    return p;
  }
  static Phase real(double v) {
    Phase p;
    p.kind = Kind::Real;
    p.real_value = v;
    return p;
  }

  bool completely_resonant() const { return kind == Kind::Exact; }

  std::string describe() const {
    if (kind == Kind::Exact) {
      return "(" + std::to_string(m) + "*alpha + " + std::to_string(l) + ")/2";
    }
    return std::to_string(real_value);
  }
};

}  // namespace amolab
