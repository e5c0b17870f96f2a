#include "heatrecon/space_time.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace heatrecon {

Vector::Vector(int n) : n_(n) {
  if (n < 1 || n > 3) throw std::invalid_argument("spatial dimension must be 1, 2 or 3");
}

Vector::Vector(std::initializer_list<double> v) : Vector(static_cast<int>(v.size())) {
  std::copy(v.begin(), v.end(), v_.begin());
}

Vector& Vector::operator+=(const Vector& o) {
  for (int i = 0; i < n_; ++i) v_[i] += o.v_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& o) {
  for (int i = 0; i < n_; ++i) v_[i] -= o.v_[i];
  return *this;
}

Vector& Vector::operator*=(double s) {
  for (int i = 0; i < n_; ++i) v_[i] *= s;
  return *this;
}

double Vector::dot(const Vector& o) const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i) s += v_[i] * o.v_[i];
  return s;
}

bool Vector::finite() const {
  for (int i = 0; i < n_; ++i)
    if (!std::isfinite(v_[i])) return false;
  return true;
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator*(double s, Vector a) { return a *= s; }
Vector operator*(Vector a, double s) { return a *= s; }

SpaceTimePoint operator-(const SpaceTimePoint& p, const SpaceTimePoint& q) {
  return {p.x - q.x, p.t - q.t};
}

SpaceTimePoint operator+(const SpaceTimePoint& p, const SpaceTimePoint& q) {
  return {p.x + q.x, p.t + q.t};
}

Complex ComplexFrequency::dot_zz() const {
  Complex s = 0.0;
  for (int i = 0; i < dim(); ++i) s += z[i] * z[i];
  return s;
}

double wrap_angle(double a) {
  constexpr double pi = std::numbers::pi;
  if (a > -pi && a <= pi) return a;
  a = std::remainder(a, 2.0 * pi);
  if (a <= -pi) a += 2.0 * pi;
  return a;
}

PhasedComplex PhasedComplex::from_complex(Complex v) {
  PhasedComplex r;
  if (v == Complex(0.0, 0.0)) return r;
  r.zero_ = false;
  r.log_mag_ = std::log(std::abs(v));
  r.arg_ = wrap_angle(std::arg(v));
  return r;
}

PhasedComplex PhasedComplex::from_log(double log_mag, double arg) {
  PhasedComplex r;
  if (log_mag == -std::numeric_limits<double>::infinity()) return r;
  r.zero_ = false;
  r.log_mag_ = log_mag;
  r.arg_ = wrap_angle(arg);
  return r;
}

PhasedComplex PhasedComplex::exp(Complex w) { return from_log(w.real(), w.imag()); }

Complex PhasedComplex::value() const { return scaled(0.0); }

Complex PhasedComplex::scaled(double shift) const {
  if (zero_) return 0.0;
  const double m = std::exp(log_mag_ - shift);
  if (arg_ == 0.0) return {m, 0.0};
  if (arg_ == std::numbers::pi) return {-m, 0.0};
  return std::polar(m, arg_);
}

PhasedComplex PhasedComplex::operator*(const PhasedComplex& o) const {
  if (zero_ || o.zero_) return {};
  return from_log(log_mag_ + o.log_mag_, arg_ + o.arg_);
}

PhasedComplex PhasedComplex::operator/(const PhasedComplex& o) const {
  if (o.zero_) throw std::domain_error("division by zero phased value");
  if (zero_) return {};
  return from_log(log_mag_ - o.log_mag_, arg_ - o.arg_);
}

PhasedComplex PhasedComplex::operator*(Complex s) const { return *this * from_complex(s); }

PhasedComplex PhasedComplex::operator+(const PhasedComplex& o) const {
  if (zero_) return o;
  if (o.zero_) return *this;
  const double m = std::max(log_mag_, o.log_mag_);
  const Complex s = scaled(m) + o.scaled(m);
  PhasedComplex r = from_complex(s);
  if (!r.zero_) r.log_mag_ += m;
  return r;
}

PhasedComplex PhasedComplex::operator-() const {
  if (zero_) return *this;
  return from_log(log_mag_, arg_ + std::numbers::pi);
}

ProbeDirection make_probe(double c, Vector omega, std::optional<Vector> omega_perp) {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("probe speed c must be positive");
  const double on = omega.norm();
  if (!(on > 0.0) || !omega.finite()) throw std::invalid_argument("omega is the zero vector");
  ProbeDirection p;
  p.c = c;
  if (omega.size() == 1) {
    p.omega = Vector{omega[0] > 0.0 ? 1.0 : -1.0};
    return p;
  }
  p.omega = omega * (1.0 / on);
  if (!omega_perp) throw std::invalid_argument("omega_perp is required for n >= 2");
  if (omega_perp->size() != omega.size())
    throw std::invalid_argument("omega_perp dimension differs from omega");
  const double pn = omega_perp->norm();
  if (!(pn > 0.0)) throw std::invalid_argument("omega_perp is the zero vector");
  Vector w = *omega_perp - omega_perp->dot(p.omega) * p.omega;
  const double wn = w.norm();
  if (wn < 1e-8 * pn) throw std::invalid_argument("omega_perp is not orthogonal to omega (parallel)");
  p.omega_perp = w * (1.0 / wn);
  return p;
}

std::array<double, 4> omega_c(const ProbeDirection& probe) {
  const double s = 1.0 / std::sqrt(1.0 + probe.c * probe.c);
  std::array<double, 4> r{};
  const int n = probe.dim();
  for (int i = 0; i < n; ++i) r[i] = probe.c * probe.omega[i] * s;
  r[n] = -s;
  return r;
}

double probe_level(const ProbeDirection& probe, const SpaceTimePoint& p) {
  return (probe.c * p.x.dot(probe.omega) - p.t) / std::sqrt(1.0 + probe.c * probe.c);
}

ComplexFrequency make_z(const ProbeDirection& probe, double tau) {
  const double c = probe.c;
  if (!(tau > 0.0) || !(c * c * tau > 1.0))
    throw std::invalid_argument("complex frequency needs c^2 tau > 1");
  ComplexFrequency f;
  f.tau = tau;
  f.probe = probe;
  const int n = probe.dim();
  const double s = std::sqrt(1.0 - 1.0 / (c * c * tau));
  f.a = Vector(n);
  f.b = Vector(n);
  for (int i = 0; i < n; ++i) {
    const double perp = n == 1 ? probe.omega[0] : (*probe.omega_perp)[i];
    f.a[i] = c * tau * probe.omega[i];
    f.b[i] = c * tau * s * perp;
    f.z[i] = {f.a[i], f.b[i]};
  }
  return f;
}

ComplexFrequency frequency_from_parts(const Vector& a, const Vector& b) {
  if (a.size() != b.size() || a.size() < 1 || a.size() > 3)
    throw std::invalid_argument("frequency parts must share a dimension in 1..3");
  if (!(b.norm() > 0.0)) throw std::invalid_argument("frequency needs Im z != 0");
  ComplexFrequency f;
  f.probe.c = 0.0;
  f.probe.omega = Vector(a.size());
  f.a = a;
  f.b = b;
  for (int i = 0; i < a.size(); ++i) f.z[i] = {a[i], b[i]};
  f.tau = f.dot_zz().real();
  return f;
}

Complex phase_exponent(const ComplexFrequency& z, const SpaceTimePoint& p) {
  Complex s = 0.0;
  for (int i = 0; i < z.dim(); ++i) s += p.x[i] * z.z[i];
  return s - p.t * z.dot_zz();
}

double halfspace_margin(const ProbeDirection& probe, const SpaceTimePoint& target,
                        const SpaceTimePoint& p) {
  return probe_level(probe, target) - probe_level(probe, p);
}

}  // namespace heatrecon
