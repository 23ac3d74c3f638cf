#include <doctest.h>

#include "gawqed/core.hpp"
#include "gawqed/scattering.hpp"

#include <cmath>
#include <random>

using namespace gawqed;

namespace {

SystemConfig make(double a1, double a2, double b1, double b2, double g = 1.0)
{
    SystemConfig c;
    c.atom_a.points = {{{a1, g}, {a2, g}}};
    c.atom_b.points = {{{b1, g}, {b2, g}}};
    return c;
}

bool close(double x, double y, double tol) { return std::abs(x - y) <= tol * std::max(1.0, std::abs(y)); }

// Hand-written per-topology values for equal rates and spacing phi >= 0.
struct Expected {
    double la, lb, ga, gb, g, gab;
};

Expected symmetric_expected(Topology t, double p)
{
    using std::cos;
    using std::sin;
    switch (t) {
    case Topology::Separate:
        return {sin(p), sin(p), 2 * (1 + cos(p)), 2 * (1 + cos(p)), (sin(p) + 2 * sin(2 * p) + sin(3 * p)) / 2,
                cos(p) + 2 * cos(2 * p) + cos(3 * p)};
    case Topology::Braided:
        return {sin(2 * p), sin(2 * p), 2 * (1 + cos(2 * p)), 2 * (1 + cos(2 * p)), (3 * sin(p) + sin(3 * p)) / 2,
                3 * cos(p) + cos(3 * p)};
    case Topology::Nested:
        return {sin(3 * p), sin(p), 2 * (1 + cos(3 * p)), 2 * (1 + cos(p)), sin(p) + sin(2 * p),
                2 * (cos(p) + cos(2 * p))};
    }
    return {};
}

SystemConfig random_any(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> ph(-10, 10), rt(0, 3);
    double p[4];
    for (double& x : p) x = ph(rng);
    std::sort(p, p + 4);
    SystemConfig c;
    // any labelling with a leftmost
    std::uniform_int_distribution<int> pick(0, 2);
    const int k = pick(rng);
    const int ia[3][2] = {{0, 1}, {0, 2}, {0, 3}};
    const int ib[3][2] = {{2, 3}, {1, 3}, {1, 2}};
    for (int n = 0; n < 2; ++n) {
        c.atom_a.points[n] = {p[ia[k][n]], rt(rng)};
        c.atom_b.points[n] = {p[ib[k][n]], rt(rng)};
    }
    return c;
}

}  // namespace

TEST_CASE("classify_topology on the three sketch geometries")
{
    CHECK(classify_topology(make(0, pi, 2 * pi, 3 * pi)) == Topology::Separate);
    CHECK(classify_topology(make(0, pi, pi / 2, 3 * pi / 2)) == Topology::Braided);
    CHECK(classify_topology(make(0, pi, pi / 4, 3 * pi / 4)) == Topology::Nested);
}

TEST_CASE("classify_topology ties and labelling")
{
    // a2 == b1 touches: separate
    CHECK(classify_topology(make(0, 1, 1, 2)) == Topology::Separate);
    // b2 == a2: nested wins
    CHECK(classify_topology(make(0, 2, 1, 2)) == Topology::Nested);
    // all coincident: nested
    CHECK(classify_topology(make(0, 0, 0, 0)) == Topology::Nested);
    // small atom inside a giant atom
    CHECK(classify_topology(make(0, 2, 1, 1)) == Topology::Nested);
    CHECK_THROWS_AS(classify_topology(make(1, 2, 0, 3)), PreconditionError);
}

TEST_CASE("validate rejects malformed atoms")
{
    SystemConfig c = make(0, 1, 2, 3);
    c.atom_a.points[0].rate = -0.1;
    CHECK_THROWS_AS(validate(c), PreconditionError);
    c = make(0, 1, 2, 3);
    c.atom_b.points = {{{3, 1}, {2, 1}}};
    CHECK_THROWS_AS(validate(c), PreconditionError);
    c = make(0, NAN, 2, 3);
    CHECK_THROWS_AS(validate(c), PreconditionError);
    c = make(0, 1, 2, 3);
    c.rate_unit = 0;
    CHECK_THROWS_AS(validate(c), PreconditionError);
}

TEST_CASE("characteristics examples")
{
    SUBCASE("separate phi = pi/2")
    {
        const auto q = characteristics(symmetric_config(Topology::Separate, pi / 2));
        CHECK(q.lamb_a == doctest::Approx(1));
        CHECK(q.lamb_b == doctest::Approx(1));
        CHECK(q.gamma_a == doctest::Approx(2));
        CHECK(q.gamma_b == doctest::Approx(2));
        CHECK(std::abs(q.g_ab) < 1e-15);
        CHECK(q.gamma_ab == doctest::Approx(-2));
    }
    SUBCASE("braided phi = pi/2 is decoherence free")
    {
        const auto q = characteristics(symmetric_config(Topology::Braided, pi / 2));
        CHECK(q.gamma_a < 1e-15);
        CHECK(q.gamma_b < 1e-15);
        CHECK(q.g_ab == doctest::Approx(1));
        CHECK(std::abs(q.gamma_ab) < 1e-15);
    }
    SUBCASE("all points coincident")
    {
        for (Topology t : {Topology::Separate, Topology::Braided, Topology::Nested}) {
            const auto q = characteristics(symmetric_config(t, 0.0));
            CHECK(q.lamb_a == 0);
            CHECK(q.lamb_b == 0);
            CHECK(q.gamma_a == 4);
            CHECK(q.gamma_b == 4);
            CHECK(q.g_ab == 0);
            CHECK(q.gamma_ab == 4);
        }
    }
}

TEST_CASE("characteristics reproduce the symmetric closed forms on a 1000-point grid")
{
    for (Topology t : {Topology::Separate, Topology::Braided, Topology::Nested})
        for (int i = 0; i < 1000; ++i) {
            const double phi = 4 * pi * i / 999.0;
            const auto q = characteristics(symmetric_config(t, phi));
            const Expected e = symmetric_expected(t, phi);
            CHECK(close(q.lamb_a, e.la, 1e-12));
            CHECK(close(q.lamb_b, e.lb, 1e-12));
            CHECK(close(q.gamma_a, e.ga, 1e-12));
            CHECK(close(q.gamma_b, e.gb, 1e-12));
            CHECK(close(q.g_ab, e.g, 1e-12));
            CHECK(close(q.gamma_ab, e.gab, 1e-12));
        }
}

TEST_CASE("characteristics scale with the rates")
{
    const auto q1 = characteristics(symmetric_config(Topology::Braided, 0.3));
    const auto q3 = characteristics(symmetric_config(Topology::Braided, 0.3, 3.0));
    CHECK(q3.gamma_a == doctest::Approx(3 * q1.gamma_a));
    CHECK(q3.g_ab == doctest::Approx(3 * q1.g_ab));
    CHECK(q3.alpha_a == doctest::Approx(q1.alpha_a));
}

TEST_CASE("property: decay rates are non-negative and outputs finite")
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 5000; ++i) {
        const auto q = characteristics(random_any(rng));
        CHECK(q.gamma_a >= 0);
        CHECK(q.gamma_b >= 0);
        for (double x : {q.lamb_a, q.lamb_b, q.g_ab, q.gamma_ab, q.alpha_a, q.alpha_b}) CHECK(std::isfinite(x));
        CHECK(std::abs(std::abs(q.root_a) - 1) < 1e-12);
    }
}

TEST_CASE("property: global phase shift leaves everything but alpha unchanged")
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> sh(-5, 5);
    for (int i = 0; i < 2000; ++i) {
        const SystemConfig c = random_any(rng);
        const double s = sh(rng);
        SystemConfig d = c;
        for (auto* atom : {&d.atom_a, &d.atom_b})
            for (auto& p : atom->points) p.phase += s;
        const auto q = characteristics(c), r = characteristics(d);
        CHECK(std::abs(q.lamb_a - r.lamb_a) < 1e-11);
        CHECK(std::abs(q.lamb_b - r.lamb_b) < 1e-11);
        CHECK(std::abs(q.gamma_a - r.gamma_a) < 1e-11);
        CHECK(std::abs(q.gamma_b - r.gamma_b) < 1e-11);
        CHECK(std::abs(q.g_ab - r.g_ab) < 1e-11);
        CHECK(std::abs(q.gamma_ab - r.gamma_ab) < 1e-11);
        if (q.gamma_a > 1e-6) {
            const double d_alpha = std::remainder(r.alpha_a - q.alpha_a - 2 * s, 2 * pi);
            CHECK(std::abs(d_alpha) < 1e-9);
        }
    }
}

TEST_CASE("property: spectra are 2pi periodic in phi (pi for braided)")
{
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> ph(0.01, 2 * pi), dl(-6, 6);
    for (int i = 0; i < 300; ++i) {
        const double phi = ph(rng), d = dl(rng);
        for (Topology t : {Topology::Separate, Topology::Braided, Topology::Nested}) {
            const double period = t == Topology::Braided ? pi : 2 * pi;
            const auto x = amplitudes_general(symmetric_config(t, phi), d);
            const auto y = amplitudes_general(symmetric_config(t, phi + period), d);
            CHECK(std::abs(x.R - y.R) < 1e-9);
            CHECK(std::abs(x.T - y.T) < 1e-9);
        }
    }
}

TEST_CASE("symmetric_config orderings")
{
    const double p = 0.4;
    const auto s = symmetric_config(Topology::Separate, p);
    CHECK(s.atom_a.points[0].phase == 0);
    CHECK(s.atom_a.points[1].phase == doctest::Approx(p));
    CHECK(s.atom_b.points[0].phase == doctest::Approx(2 * p));
    CHECK(s.atom_b.points[1].phase == doctest::Approx(3 * p));
    const auto b = symmetric_config(Topology::Braided, p);
    CHECK(b.atom_a.points[1].phase == doctest::Approx(2 * p));
    CHECK(b.atom_b.points[0].phase == doctest::Approx(p));
    const auto n = symmetric_config(Topology::Nested, p);
    CHECK(n.atom_a.points[1].phase == doctest::Approx(3 * p));
    CHECK(n.atom_b.points[1].phase == doctest::Approx(2 * p));
    CHECK(classify_topology(s) == Topology::Separate);
    CHECK(classify_topology(b) == Topology::Braided);
    CHECK(classify_topology(n) == Topology::Nested);
}

TEST_CASE("drive couplings are referenced to the leftmost point")
{
    SystemConfig c = make(1.0, 2.0, 1.5, 3.0);
    c.atom_b.points[0].rate = 4.0;
    const auto om = drive_couplings(c);
    const cplx ea = std::sqrt(2.0) * (1.0 + std::polar(1.0, 1.0));
    const cplx eb = std::sqrt(8.0) * std::polar(1.0, 0.5) + std::sqrt(2.0) * std::polar(1.0, 2.0);
    CHECK(std::abs(om[0] - ea) < 1e-14);
    CHECK(std::abs(om[1] - eb) < 1e-14);
}
