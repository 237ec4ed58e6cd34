#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "rpfm/errors.hpp"
#include "rpfm/matrix_market.hpp"
#include "rpfm/problem.hpp"

using namespace rpfm;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("rpfm_test_problem_" + name);
    fs::remove_all(d);
    return d;
}

bool bit_identical(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (std::size_t i = 0; i < a.entries().size(); ++i) {
        if (std::signbit(a.entries()[i]) != std::signbit(b.entries()[i]) || a.entries()[i] != b.entries()[i])
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("uniform stream is the top 53 bits of mt19937_64") {
    std::mt19937_64 ref(1234);
    UniformStream s(1234);
    for (int i = 0; i < 100; ++i) {
        const double expect = static_cast<double>(ref() >> 11) * 0x1.0p-53;
        const double got = s.next();
        CHECK(got == expect);
        CHECK(got >= 0.0);
        CHECK(got < 1.0);
    }
    // the engine sequence itself is pinned by the C++ standard
    std::mt19937_64 def;
    for (int i = 0; i < 9999; ++i) def();
    CHECK(def() == 9981545732273789042ULL);
}

TEST_CASE("zero rows and columns get eps on the diagonal position") {
    CHECK(fix_zero_rows_cols(DenseMatrix{{0, 0}, {1, 2}}, 1e-6) == DenseMatrix{{1e-6, 0}, {1, 2}});
    CHECK(fix_zero_rows_cols(DenseMatrix{{0, 1}, {0, 2}}, 1e-6) == DenseMatrix{{1e-6, 1}, {0, 2}});
    const DenseMatrix full{{1, 2}, {3, 4}};
    CHECK(fix_zero_rows_cols(full, 1e-6) == full);

    const DenseMatrix z(3, 2);
    const DenseMatrix f = fix_zero_rows_cols(z, 1e-6);
    for (std::size_t i = 0; i < 3; ++i) {
        bool any = false;
        for (std::size_t j = 0; j < 2; ++j) any = any || f(i, j) != 0.0;
        CHECK(any);
    }
    for (std::size_t j = 0; j < 2; ++j) {
        bool any = false;
        for (std::size_t i = 0; i < 3; ++i) any = any || f(i, j) != 0.0;
        CHECK(any);
    }
}

TEST_CASE("skew embedding") {
    CHECK(build_skew_embedding(DenseMatrix{{2}}) == DenseMatrix{{0, -2}, {2, 0}});

    const DenseMatrix a = random_matrix(5, 7, 9);
    const DenseMatrix m = build_skew_embedding(a);
    REQUIRE(m.rows() == 12);
    for (std::size_t i = 0; i < 12; ++i)
        for (std::size_t j = 0; j < 12; ++j) CHECK(m(i, j) + m(j, i) == 0.0);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Vector v(12);
        for (auto& x : v) x = u(rng);
        CHECK(std::abs(dot(v, mat_vec(m, v))) <= 1e-14 * norm_inf(m) * dot(v, v));
    }
}

TEST_CASE("designed solution alternates and is complementary") {
    const auto s4 = designed_solution(4);
    CHECK(s4.x == Vector{1, 0, 1, 0});
    CHECK(s4.y == Vector{0, 1, 0, 1});
    const auto s1 = designed_solution(1);
    CHECK(s1.x == Vector{1});
    CHECK(s1.y == Vector{0});
    for (std::size_t n = 1; n < 10; ++n) {
        const auto s = designed_solution(n);
        CHECK(dot(s.x, s.y) == 0.0);
    }
}

TEST_CASE("build_q") {
    CHECK(build_q(DenseMatrix{{0, -2}, {2, 0}}, Vector{1, 0}, Vector{0, 1}) == Vector{0, -1});
    CHECK(build_q(DenseMatrix(2, 2), Vector{3, 4}, Vector{5, 6}) == Vector{5, 6});
}

TEST_CASE("perturb_dense") {
    const DenseMatrix a = random_matrix(4, 6, 1);
    CHECK(perturb_dense(a, 0.0, 5) == a);
    const DenseMatrix p = perturb_dense(a, 1e-3, 5);
    for (std::size_t i = 0; i < a.entries().size(); ++i) {
        CHECK(p.entries()[i] >= a.entries()[i]);
        CHECK(p.entries()[i] < a.entries()[i] + 1e-3);
    }
    CHECK(bit_identical(p, perturb_dense(a, 1e-3, 5)));
    CHECK_FALSE(p == perturb_dense(a, 1e-3, 6));
    CHECK_THROWS_AS(perturb_dense(a, -1.0, 5), InvalidArgument);

    // draws are row-major from the documented stream
    UniformStream s(5);
    CHECK(p(0, 1) == a(0, 1) + 1e-3 * (s.next(), s.next()));
}

TEST_CASE("random_matrix is uniform in [-1, 1) and seeded") {
    const DenseMatrix a = random_matrix(30, 30, 77);
    for (double v : a.entries()) {
        CHECK(v >= -1.0);
        CHECK(v < 1.0);
    }
    CHECK(bit_identical(a, random_matrix(30, 30, 77)));
}

TEST_CASE("generated problems satisfy the designed solution") {
    for (double eps : {0.0, 1e-3}) {
        GeneratorSpec spec;
        spec.a = random_matrix(6, 9, 3);
        spec.a(2, 4) = 0.0;
        spec.perturb_epsilon = eps;
        spec.seed = 11;
        const LcpProblem p = generate_problem(spec);
        REQUIRE(p.size() == 15);
        REQUIRE(p.designed_solution);
        const auto r = termination_residual(p, p.designed_solution->x, p.designed_solution->y);
        CHECK(r.feas_inf <= 1e-12 * norm_inf(p.m));
        CHECK(r.comp_inf == 0.0);
        CHECK_NOTHROW(p.validate());
    }

    GeneratorSpec zero;
    zero.a = DenseMatrix(2, 3);
    const LcpProblem pz = generate_problem(zero);
    CHECK(pz.m(3, 0) == 1e-6);  // A(0,0) after the zero fix
    CHECK(pz.m(0, 3) == -1e-6);
}

TEST_CASE("termination residual") {
    LcpProblem p;
    p.m = DenseMatrix::identity(2);
    p.q = Vector{0, 0};
    const auto r = termination_residual(p, Vector{1, 1}, Vector{1, 1});
    CHECK(r.feas_inf == 0.0);
    CHECK(r.comp_inf == 1.0);
    CHECK(r.terr() == 1.0);

    p.q = Vector{2, 3};
    const auto z = termination_residual(p, Vector{0, 0}, p.q);
    CHECK(z.feas_inf == 0.0);
    CHECK(z.comp_inf == 0.0);
    CHECK_THROWS_AS(termination_residual(p, Vector{0}, p.q), DimensionMismatch);
}

TEST_CASE("problem validation") {
    LcpProblem p;
    p.m = DenseMatrix(2, 3);
    p.q = Vector{1, 2};
    CHECK_THROWS_AS(p.validate(), DimensionMismatch);
    p.m = DenseMatrix(2, 2);
    p.q = Vector{1, std::nan("")};
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

TEST_CASE("matrix market reading") {
    {
        std::istringstream in("%%MatrixMarket matrix coordinate real general\n% c\n2 2 1\n1 1 5.0\n");
        CHECK(read_matrix_market(in) == DenseMatrix{{5, 0}, {0, 0}});
    }
    {
        std::istringstream in("%%MatrixMarket matrix coordinate real general\n3 2 0\n");
        CHECK(read_matrix_market(in) == DenseMatrix(3, 2));
    }
    {
        std::istringstream in("%%MatrixMarket matrix coordinate integer symmetric\n2 2 2\n1 1 1\n2 1 3\n");
        CHECK(read_matrix_market(in) == DenseMatrix{{1, 3}, {3, 0}});
    }
    {
        std::istringstream in("%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 1\n2 1 2\n");
        CHECK(read_matrix_market(in) == DenseMatrix{{0, -2}, {2, 0}});
    }
    {
        std::istringstream in("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n");
        CHECK(read_matrix_market(in) == DenseMatrix{{1, 3}, {2, 4}});  // column-major
    }
    {
        std::istringstream in("%%MatrixMarket matrix array real general\n3 1\n1\n-2\n3.5\n");
        CHECK(read_vector(in) == Vector{1, -2, 3.5});
    }
}

TEST_CASE("matrix market errors") {
    auto parse = [](const std::string& s) {
        std::istringstream in(s);
        return read_matrix_market(in, "t");
    };
    CHECK_THROWS_AS(parse("not a header\n1 1 0\n"), ParseError);
    CHECK_THROWS_AS(parse("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n"), ParseError);
    CHECK_THROWS_AS(parse("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n"), ParseError);
    CHECK_THROWS_AS(parse("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 abc\n"), ParseError);
    CHECK_THROWS_AS(parse("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n"), UnsupportedFormat);
    CHECK_THROWS_AS(parse("%%MatrixMarket matrix coordinate pattern general\n1 1 1\n1 1\n"), UnsupportedFormat);
    try {
        parse("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 x 1.0\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(load_matrix_market("/nonexistent/file.mtx"), IoError);
}

TEST_CASE("matrix market round trip is bit exact") {
    DenseMatrix a = random_matrix(4, 3, 5);
    a(1, 1) = 0.0;
    a(2, 0) = 1.0 / 3.0;
    a(3, 2) = -5e-300;
    std::stringstream ss;
    write_matrix_market(ss, a);
    CHECK(bit_identical(read_matrix_market(ss), a));

    const Vector v{0.1, -2.0 / 7.0, 1e300, 0.0};
    std::stringstream vs;
    write_vector(vs, v);
    CHECK(read_vector(vs) == v);
}

TEST_CASE("bundle round trip") {
    GeneratorSpec spec;
    spec.a = random_matrix(3, 4, 2);
    spec.perturb_epsilon = 1e-3;
    spec.seed = 99;
    spec.name = "tiny";
    const LcpProblem p = generate_problem(spec);
    const fs::path dir = scratch_dir("roundtrip");
    save_bundle(p, dir);
    CHECK(fs::exists(dir / "M.mtx"));
    CHECK(fs::exists(dir / "q.mtx"));
    CHECK(fs::exists(dir / "meta.txt"));

    const LcpProblem back = load_bundle(dir);
    CHECK(bit_identical(back.m, p.m));
    CHECK(back.q == p.q);
    CHECK(back.name == "tiny");
    CHECK(back.seed == 99);
    REQUIRE(back.designed_solution);
    CHECK(back.designed_solution->x == p.designed_solution->x);

    fs::remove(dir / "ystar.mtx");
    CHECK_THROWS_AS(load_bundle(dir), IoError);
    CHECK_THROWS_AS(load_bundle(dir / "missing"), IoError);
    fs::remove_all(dir);
}

TEST_CASE("bundled netlib matrices load") {
    const fs::path dir = fs::path(RPFM_DATA_DIR) / "netlib";
    const DenseMatrix afiro = load_matrix_market(dir / "afiro.mtx");
    CHECK(afiro.rows() + afiro.cols() == 78);
    CHECK(load_matrix_market(dir / "adlittle.mtx").rows() + load_matrix_market(dir / "adlittle.mtx").cols() == 194);
    CHECK(load_matrix_market(dir / "blend.mtx").rows() + load_matrix_market(dir / "blend.mtx").cols() == 188);
    CHECK(load_matrix_market(dir / "sc50a.mtx").rows() + load_matrix_market(dir / "sc50a.mtx").cols() == 128);
    CHECK(load_matrix_market(dir / "scagr7.mtx").rows() + load_matrix_market(dir / "scagr7.mtx").cols() == 314);
}
