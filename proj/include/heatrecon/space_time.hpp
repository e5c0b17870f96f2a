#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <optional>
#include <stdexcept>

namespace heatrecon {

using Complex = std::complex<double>;

// Spatial vector of dimension 1..3.
class Vector {
 public:
  Vector() = default;
  explicit Vector(int n);
  Vector(std::initializer_list<double> v);

  int size() const { return n_; }
  double& operator[](int i) { return v_[i]; }
  double operator[](int i) const { return v_[i]; }

  Vector& operator+=(const Vector& o);
  Vector& operator-=(const Vector& o);
  Vector& operator*=(double s);

  double dot(const Vector& o) const;
  double norm() const { return std::sqrt(dot(*this)); }
  bool finite() const;

 private:
  std::array<double, 3> v_{};
  int n_ = 0;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator*(double s, Vector a);
Vector operator*(Vector a, double s);

using ComplexVector = std::array<Complex, 3>;

struct SpaceTimePoint {
  Vector x;
  double t = 0.0;

  int dim() const { return x.size(); }
};

SpaceTimePoint operator-(const SpaceTimePoint& p, const SpaceTimePoint& q);
SpaceTimePoint operator+(const SpaceTimePoint& p, const SpaceTimePoint& q);

struct ProbeDirection {
  double c = 1.0;
  Vector omega;
  std::optional<Vector> omega_perp;

  int dim() const { return omega.size(); }
};

struct ComplexFrequency {
  ComplexVector z{};
  double tau = 0.0;
  ProbeDirection probe;
  Vector a;
  Vector b;

  int dim() const { return probe.dim(); }
  Complex dot_zz() const;
};

// Complex scalar held as modulus logarithm and argument.
class PhasedComplex {
 public:
  PhasedComplex() = default;
  static PhasedComplex zero() { return {}; }
  static PhasedComplex from_complex(Complex v);
  static PhasedComplex from_log(double log_mag, double arg);
  // e^{w} for complex w, never materialized.
  static PhasedComplex exp(Complex w);

  bool is_zero() const { return zero_; }
  double log_mag() const { return log_mag_; }
  double arg() const { return arg_; }

  // Materializes the value; overflows to inf only if the true modulus does.
  Complex value() const;
  // value() * e^{-shift}
  Complex scaled(double shift) const;

  PhasedComplex operator*(const PhasedComplex& o) const;
  PhasedComplex operator/(const PhasedComplex& o) const;
  PhasedComplex operator*(Complex s) const;
  PhasedComplex operator+(const PhasedComplex& o) const;
  PhasedComplex operator-() const;
  PhasedComplex operator-(const PhasedComplex& o) const { return *this + (-o); }

 private:
  double log_mag_ = 0.0;
  double arg_ = 0.0;
  bool zero_ = true;
};

double wrap_angle(double a);

ProbeDirection make_probe(double c, Vector omega, std::optional<Vector> omega_perp = std::nullopt);

// (c omega, -1) / sqrt(1 + c^2), the unit normal of the probe hyperplanes.
std::array<double, 4> omega_c(const ProbeDirection& probe);

// Level of p along omega_c.
double probe_level(const ProbeDirection& probe, const SpaceTimePoint& p);

ComplexFrequency make_z(const ProbeDirection& probe, double tau);

// Frequency with prescribed Re z and Im z, not tied to a probe; tau = Re(z.z).
ComplexFrequency frequency_from_parts(const Vector& a, const Vector& b);

// x.z - t (z.z)
Complex phase_exponent(const ComplexFrequency& z, const SpaceTimePoint& p);

// Positive when p lies on the decaying side relative to the target.
double halfspace_margin(const ProbeDirection& probe, const SpaceTimePoint& target,
                        const SpaceTimePoint& p);

}  // namespace heatrecon
