#include "lcf/tensor.hpp"

#include <algorithm>
#include <numeric>

namespace lcf {

namespace {

constexpr int kPair[3][3] = {{0, 3, 5}, {3, 1, 4}, {5, 4, 2}};

}  // namespace

double SymTensor3::operator()(int i, int j) const { return c[static_cast<std::size_t>(kPair[i][j])]; }

Mat3 SymTensor3::matrix() const {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = (*this)(i, j);
  return m;
}

SymTensor3 SymTensor3::from_matrix(const Mat3& m) {
  return {m(0, 0), m(1, 1), m(2, 2), 0.5 * (m(0, 1) + m(1, 0)), 0.5 * (m(1, 2) + m(2, 1)),
          0.5 * (m(2, 0) + m(0, 2))};
}

SymTensor3& SymTensor3::operator+=(const SymTensor3& o) {
  for (std::size_t i = 0; i < 6; ++i) c[i] += o.c[i];
  return *this;
}

SymTensor3& SymTensor3::operator-=(const SymTensor3& o) {
  for (std::size_t i = 0; i < 6; ++i) c[i] -= o.c[i];
  return *this;
}

SymTensor3& SymTensor3::operator*=(double s) {
  for (auto& v : c) v *= s;
  return *this;
}

SymTensor3& SymTensor3::operator/=(double s) {
  for (auto& v : c) v /= s;
  return *this;
}

bool SymTensor3::all_finite() const {
  return std::all_of(c.begin(), c.end(), [](double v) { return std::isfinite(v); });
}

SymTensor3 operator+(SymTensor3 a, const SymTensor3& b) { return a += b; }
SymTensor3 operator-(SymTensor3 a, const SymTensor3& b) { return a -= b; }
SymTensor3 operator-(SymTensor3 a) { return a *= -1.0; }
SymTensor3 operator*(SymTensor3 a, double s) { return a *= s; }
SymTensor3 operator*(double s, SymTensor3 a) { return a *= s; }
SymTensor3 operator/(SymTensor3 a, double s) { return a /= s; }

double trace(const SymTensor3& t) { return t[0] + t[1] + t[2]; }

double mean(const SymTensor3& t) { return trace(t) / 3.0; }

SymTensor3 dev(const SymTensor3& t) {
  const double p = mean(t);
  return {t[0] - p, t[1] - p, t[2] - p, t[3], t[4], t[5]};
}

double contract(const SymTensor3& a, const SymTensor3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + 2.0 * (a[3] * b[3] + a[4] * b[4] + a[5] * b[5]);
}

double norm(const SymTensor3& t) { return std::sqrt(contract(t, t)); }

double j2(const SymTensor3& t) {
  const SymTensor3 s = dev(t);
  return 0.5 * contract(s, s);
}

double von_mises(const SymTensor3& t) { return std::sqrt(3.0 * j2(t)); }

SymTensor3 dyad(const Vec3& e) {
  return {e[0] * e[0], e[1] * e[1], e[2] * e[2], e[0] * e[1], e[1] * e[2], e[2] * e[0]};
}

SymTensor3 rotate(const SymTensor3& t, const Mat3& r) {
  return SymTensor3::from_matrix(r * t.matrix() * r.transpose());
}

SymTensor3 PrincipalDecomposition::reassemble() const {
  SymTensor3 out;
  for (std::size_t k = 0; k < 3; ++k) out += values[k] * dyad(directions[k]);
  return out;
}

PrincipalDecomposition principal(const SymTensor3& t) {
  Mat3 a = t.matrix();
  Mat3 v = Mat3::Identity();

  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  for (int sweep = 0; sweep < 64; ++sweep) {
    const double off = std::abs(a(0, 1)) + std::abs(a(1, 2)) + std::abs(a(0, 2));
    if (off <= 1e-17 * scale) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (std::abs(a(p, q)) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double tn = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double cs = 1.0 / std::sqrt(tn * tn + 1.0);
        const double sn = tn * cs;
        Mat3 rot = Mat3::Identity();
        rot(p, p) = cs;
        rot(q, q) = cs;
        rot(p, q) = sn;
        rot(q, p) = -sn;
        a = rot.transpose() * a * rot;
        a(p, q) = a(q, p) = 0.0;
        v = v * rot;
      }
    }
  }

  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) > a(j, j); });

  PrincipalDecomposition out;
  for (std::size_t k = 0; k < 3; ++k) {
    out.values[k] = a(order[k], order[k]);
    out.directions[k] = v.col(order[k]).normalized();
  }
  return out;
}

SymTensor3 tensile_part(const SymTensor3& t) {
  const PrincipalDecomposition pd = principal(t);
  SymTensor3 out;
  for (std::size_t k = 0; k < 3; ++k) out += ramp(pd.values[k]) * dyad(pd.directions[k]);
  return out;
}

SymTensor3 compressive_part(const SymTensor3& t) {
  const PrincipalDecomposition pd = principal(t);
  SymTensor3 out;
  for (std::size_t k = 0; k < 3; ++k) out -= ramp(-pd.values[k]) * dyad(pd.directions[k]);
  return out;
}

Vec6 to_stress_voigt(const SymTensor3& s) {
  Vec6 v;
  for (int i = 0; i < 6; ++i) v[i] = s[i];
  return v;
}

SymTensor3 from_stress_voigt(const Vec6& v) { return {v[0], v[1], v[2], v[3], v[4], v[5]}; }

Vec6 to_strain_voigt(const SymTensor3& e) {
  Vec6 v;
  for (int i = 0; i < 3; ++i) v[i] = e[i];
  for (int i = 3; i < 6; ++i) v[i] = 2.0 * e[i];
  return v;
}

SymTensor3 from_strain_voigt(const Vec6& v) {
  return {v[0], v[1], v[2], 0.5 * v[3], 0.5 * v[4], 0.5 * v[5]};
}

Mat6 isotropic_stiffness(double bulk, double shear) {
  Mat6 c = Mat6::Zero();
  const double lam = bulk - 2.0 * shear / 3.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) c(i, j) = lam;
    c(i, i) += 2.0 * shear;
    c(i + 3, i + 3) = shear;
  }
  return c;
}

}  // namespace lcf
