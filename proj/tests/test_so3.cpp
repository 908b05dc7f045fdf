#include <cmath>
#include <numbers>

#include "doctest.h"
#include "geomech/errors.hpp"
#include "geomech/so3.hpp"
#include "oracles/polar.hpp"
#include "oracles/random.hpp"
#include "oracles/series_exp.hpp"

using namespace geomech;
using std::numbers::pi;

namespace {
double fro(const Mat3& m) { return m.norm(); }
}  // namespace

TEST_CASE("hat builds the cross-product matrix") {
  Mat3 expected;
  expected << 0, -3, 2, 3, 0, -1, -2, 1, 0;
  CHECK(hat(Vec3(1, 2, 3)) == expected);
  CHECK(hat(Vec3::Zero()) == Mat3::Zero());
  const Vec3 v(0.3, -1.2, 2.0);
  CHECK((hat(v) * v).norm() == doctest::Approx(0.0));
  oracle::Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const Vec3 a = oracle::random_vec(rng), b = oracle::random_vec(rng);
    CHECK((hat(a) * b - a.cross(b)).norm() < 1e-14);
  }
}

TEST_CASE("vee inverts hat exactly and rejects non-skew input") {
  oracle::Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const Vec3 v = oracle::random_vec(rng, 5.0);
    const Mat3 h = hat(v);
    CHECK(h + h.transpose() == Mat3::Zero());
    CHECK(vee(h) == v);
  }
  Mat3 m = hat(Vec3(1, 2, 3));
  m(0, 1) += 1e-3;
  CHECK_THROWS_AS(vee(m), NotSkew);
  m = hat(Vec3(1, 2, 3));
  m(2, 2) = 1e-7;  // symmetric part below the threshold
  CHECK(vee(m).isApprox(Vec3(1, 2, 3)));
}

TEST_CASE("exp_so3 matches the power series") {
  CHECK(fro(exp_so3(Vec3(pi / 2, 0, 0)).matrix() - oracle::axis_angle(Vec3::UnitX(), pi / 2)) < 1e-14);
  CHECK(exp_so3(Vec3::Zero()).matrix() == Mat3::Identity());
  oracle::Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const Vec3 v = oracle::random_unit(rng) * std::uniform_real_distribution<double>(0.0, 3.0)(rng);
    CHECK(fro(exp_so3(v).matrix() - oracle::series_exp(v)) < 1e-13);
  }
  for (double scale : {1e-9, 5e-5, 9.99e-5, 1.0001e-4, 1e-3}) {
    const Vec3 v = scale * Vec3(0.6, -0.8, 0.0);
    CHECK(fro(exp_so3(v).matrix() - oracle::series_exp(v)) < 1e-15);
  }
}

TEST_CASE("log_so3 round trips and handles the angle-pi branch") {
  oracle::Rng rng(4);
  for (int i = 0; i < 500; ++i) {
    const double angle = std::uniform_real_distribution<double>(0.0, pi - 1e-6)(rng);
    const Vec3 v = oracle::random_unit(rng) * angle;
    CHECK((log_so3(exp_so3(v)) - v).norm() < 1e-8);
  }
  for (int i = 0; i < 500; ++i) {
    const RotationMatrix r(oracle::random_rotation(rng));
    CHECK(fro(exp_so3(log_so3(r)).matrix() - r.matrix()) < 1e-9);
  }
  for (double eps : {0.0, 1e-12, 1e-8, 1e-6, 1e-3}) {
    const Vec3 axis = Vec3(1, -2, 0.5).normalized();
    const RotationMatrix r(oracle::axis_angle(axis, pi - eps));
    const Vec3 w = log_so3(r);
    CHECK(w.norm() == doctest::Approx(pi - eps).epsilon(1e-12));
    CHECK(fro(exp_so3(w).matrix() - r.matrix()) < 1e-9);
  }
  CHECK(log_so3(RotationMatrix::identity()) == Vec3::Zero());
  const Vec3 tiny(1e-7, -2e-7, 3e-8);
  CHECK((log_so3(exp_so3(tiny)) - tiny).norm() < 1e-20);
}

TEST_CASE("rotation_mean") {
  const RotationMatrix m = rotation_mean(RotationMatrix::identity(), rot_z(pi / 2));
  CHECK(fro(m.matrix() - rot_z(pi / 4).matrix()) < 1e-12);
  CHECK_THROWS_AS(rotation_mean(RotationMatrix::identity(), rot_z(pi - 1e-9)), DegenerateMean);

  oracle::Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const RotationMatrix a(oracle::random_rotation(rng));
    const RotationMatrix b = exp_so3(oracle::random_vec(rng, 0.7)) * a;
    const RotationMatrix q(oracle::random_rotation(rng));
    CHECK(rotation_mean(a, b).matrix() == rotation_mean(b, a).matrix());
    CHECK(fro(rotation_mean(q * a, q * b).matrix() - (q * rotation_mean(a, b)).matrix()) < 1e-9);
    CHECK(fro(rotation_mean(a, b).matrix() - oracle::polar_rotation(a.matrix() + b.matrix())) < 1e-12);
  }
}

TEST_CASE("tilde is linear and matches the trace formula") {
  Mat3 expected = Vec3(5, 4, 3).asDiagonal();
  CHECK(tilde(Vec3(1, 2, 3).asDiagonal()) == expected);
  // Dyadic integer entries keep every operation exact.
  Mat3 a, b;
  a << 1, 2, -3, 0.5, 4, 8, -2, 0.25, 1;
  b << -1, 0.5, 2, 3, -4, 1, 0, 6, 2;
  const double s = 2.0, t = -0.5;
  CHECK(tilde(s * a + t * b) == s * tilde(a) + t * tilde(b));
}

TEST_CASE("polar projection") {
  CHECK(fro(polar_project(1.1 * Mat3::Identity()).matrix() - Mat3::Identity()) < 1e-15);
  oracle::Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    const Mat3 r = oracle::random_rotation(rng);
    Mat3 noisy = r + 1e-3 * Mat3::Random();
    CHECK(fro(polar_project(noisy).matrix() - oracle::polar_rotation(noisy)) < 1e-12);
    const PolarDecomposition pd = polar_decompose(noisy);
    CHECK(fro(pd.stretch * pd.rotation.matrix() - noisy) < 1e-12);
    CHECK(fro(pd.stretch - pd.stretch.transpose()) < 1e-12);
  }
  CHECK_THROWS_AS(polar_project(Mat3::Zero()), SingularInput);
  CHECK_THROWS_AS(polar_project(-Mat3::Identity()), SingularInput);
}

TEST_CASE("RotationMatrix validates its invariants") {
  CHECK_NOTHROW(RotationMatrix(oracle::axis_angle(Vec3(1, 1, 0), 0.3)));
  CHECK_THROWS_AS(RotationMatrix(1.001 * Mat3::Identity()), InvalidRotation);
  CHECK_THROWS_AS(RotationMatrix(Vec3(1, 1, -1).asDiagonal()), InvalidRotation);
  Mat3 m = Mat3::Identity();
  m(0, 0) = std::nan("");
  CHECK_THROWS_AS(RotationMatrix{m}, InvalidRotation);
  // Within tolerance is accepted as-is.
  Mat3 near = Mat3::Identity();
  near(0, 1) = 1e-11;
  CHECK(RotationMatrix(near).matrix() == near);
}

TEST_CASE("body and space perturbations") {
  const RotationMatrix t = rot_x(0.4) * rot_z(-1.1);
  const Vec3 d(1e-3, -2e-3, 5e-4);
  CHECK(fro(perturb_body(t, d).matrix() - (t * exp_so3(d)).matrix()) < 1e-15);
  CHECK(fro(perturb_space(t, d).matrix() - (exp_so3(d) * t).matrix()) < 1e-15);
  // exp(T d) T = T exp(d): the two conventions differ by the attitude.
  CHECK(fro(perturb_space(t, t * d).matrix() - perturb_body(t, d).matrix()) < 1e-14);
}

TEST_CASE("series helpers switch branches continuously") {
  for (double x : {0.0, 1e-8, 9.9e-5, 1.01e-4, 0.1, 2.0}) {
    const long double xl = x;
    const double ref_sinc = x == 0.0 ? 1.0 : static_cast<double>(std::sin(xl) / xl);
    const double ref_c = x == 0.0 ? 0.5 : static_cast<double>(2 * std::sin(xl / 2) * std::sin(xl / 2) / (xl * xl));
    CHECK(sinc(x) == doctest::Approx(ref_sinc).epsilon(1e-14));
    CHECK(one_minus_cos_over_sq(x) == doctest::Approx(ref_c).epsilon(1e-13));
  }
}
