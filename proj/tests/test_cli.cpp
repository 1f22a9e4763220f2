#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "support.hpp"

using namespace htensor;
using ht_test::unit_basis;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

CliResult run_cli(const std::string& args) {
    std::string cmd = std::string(HT_CLI_PATH) + " " + args + " > cli_stdout.txt 2> cli_stderr.txt";
    int status = std::system(cmd.c_str());
    CliResult r;
#ifdef _WIN32
    r.exit_code = status;
#else
    r.exit_code = WEXITSTATUS(status);
#endif
    r.out = slurp("cli_stdout.txt");
    r.err = slurp("cli_stderr.txt");
    return r;
}

void write_vector_file(const std::string& path, const std::vector<double>& v) {
    write_tensor_file(path, from_vector(v));
}

}  // namespace

TEST_CASE("make identity writes a readable identity tensor") {
    CliResult r = run_cli("make identity --half-order 2 --dim 3 -o cli_I.ht");
    REQUIRE(r.exit_code == 0);
    DenseTensor t = read_tensor_file("cli_I.ht");
    CHECK(max_abs_diff(t, identity_tensor(2, 3)) == 0.0);
}

TEST_CASE("make wedge output is antisymmetric when re-read") {
    write_vector_file("cli_v1.ht", {1.0, 0.5, -0.25});
    write_vector_file("cli_v2.ht", {0.0, 2.0, 1.0});
    CliResult r = run_cli("make wedge cli_v1.ht cli_v2.ht --norm sqrt-factorial -o cli_w.ht");
    REQUIRE(r.exit_code == 0);
    CHECK(is_antisymmetric(read_tensor_file("cli_w.ht"), 1e-12).ok);
}

TEST_CASE("convert round-trips between the text and binary formats") {
    CliResult mk = run_cli("make sas --dim 3 -o cli_q3.ht");
    REQUIRE(mk.exit_code == 0);
    REQUIRE(run_cli("convert cli_q3.ht cli_q3.htb").exit_code == 0);
    REQUIRE(run_cli("convert cli_q3.htb cli_q3_back.ht").exit_code == 0);
    CHECK(slurp("cli_q3.ht") == slurp("cli_q3_back.ht"));
    std::string bin = slurp("cli_q3.htb");
    REQUIRE(bin.size() >= 4);
    CHECK(bin.substr(0, 4) == "HTSR");
}

TEST_CASE("identical invocations produce identical bytes") {
    std::string args = "rank estimate cli_q3.ht --max-rank 2 --restarts 3 --iters 60 --seed 7 -o cli_rank1.txt";
    REQUIRE(run_cli("make sas --dim 3 -o cli_q3.ht").exit_code == 0);
    CliResult a = run_cli(args);
    std::string table1 = slurp("cli_rank1.txt");
    CliResult b = run_cli("rank estimate cli_q3.ht --max-rank 2 --restarts 3 --iters 60 --seed 7 -o cli_rank2.txt");
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    CHECK(a.out.substr(0, a.out.find("wrote")) == b.out.substr(0, b.out.find("wrote")));
    CHECK(table1 == slurp("cli_rank2.txt"));
    CHECK(table1.find("# matricization-lower-bound 3") != std::string::npos);
}

TEST_CASE("inverting a separable tensor exits with the numerical-failure code") {
    write_vector_file("cli_u1.ht", {1, 0, 0, 0, 0.5});
    write_vector_file("cli_u2.ht", {0, 1, 0, 0, -0.5});
    write_vector_file("cli_u3.ht", {0, 0, 1, 0, 0.25});
    write_vector_file("cli_u4.ht", {0, 0, 0, 1, 1.0});
    REQUIRE(run_cli("make vee cli_u1.ht cli_u2.ht cli_u3.ht cli_u4.ht -o cli_sep.ht").exit_code == 0);
    CliResult r = run_cli("invert cli_sep.ht -o cli_sep_inv.ht");
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("Singular") != std::string::npos);
}

TEST_CASE("malformed input files exit with code 2 and name the file") {
    {
        std::ofstream bad("cli_bad.ht", std::ios::binary);
        bad << "htensor 1\norder 2\ndims 2 2\nlayout row-major\n1\n2\n3\n";
    }
    CliResult r = run_cli("det cli_bad.ht");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("cli_bad.ht") != std::string::npos);
    CHECK(r.err.find("entry count mismatch") != std::string::npos);
}

TEST_CASE("usage errors exit with code 1") {
    CHECK(run_cli("det cli_q3.ht --no-such-flag").exit_code == 1);
    CHECK(run_cli("frobnicate x").exit_code == 1);
    CHECK(run_cli("probe definiteness cli_q3.ht").exit_code == 1);  // --seed is mandatory
    // Shape misuse of a well-formed file is a usage error, not a parse error.
    REQUIRE(run_cli("make identity --half-order 1 --dim 2 -o cli_I2.ht").exit_code == 0);
    CHECK(run_cli("product t cli_I2.ht cli_I2.ht -o cli_t.ht").exit_code == 1);
}

TEST_CASE("subspace-dim prints the counted dimension") {
    CliResult r = run_cli("subspace-dim --dim 2 --perm 2 3 4 1");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out == "dimension 6\n");
    CliResult s = run_cli("subspace-dim --dim 2 --perm 2 1 3 4 --signed");
    REQUIRE(s.exit_code == 0);
    CHECK(s.out == "dimension 4\n");
}

TEST_CASE("det prints the NS determinant") {
    REQUIRE(run_cli("make identity --half-order 1 --dim 2 -o cli_I2.ht").exit_code == 0);
    REQUIRE(run_cli("product s cli_I2.ht cli_I2.ht -o cli_I2s.ht").exit_code == 0);  // outer: order 4
    CliResult r = run_cli("det cli_I2s.ht");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("ns-det") == 0);
}

TEST_CASE("classify and decompose verbs") {
    REQUIRE(run_cli("make sas --dim 3 -o cli_q3.ht").exit_code == 0);
    CliResult c = run_cli("classify antisymmetric cli_q3.ht");
    REQUIRE(c.exit_code == 0);
    CHECK(c.out.find("antisymmetric yes") == 0);

    CliResult cs = run_cli("classify sigma cli_q3.ht --perm 2 1 3 --signed");
    REQUIRE(cs.exit_code == 0);
    CHECK(cs.out.find("sigma-sign-symmetric yes") == 0);

    CliResult d = run_cli("decompose sas cli_q3.ht -o cli_q3_witness.ht");
    REQUIRE(d.exit_code == 0);
    CHECK(d.out.find("separable yes") == 0);
    // The witness rows wedge back to Q3 under unit normalization.
    DenseTensor rows = read_tensor_file("cli_q3_witness.ht");
    std::vector<std::vector<double>> vs;
    for (int i = 1; i <= rows.extent(1); ++i) {
        std::vector<double> v;
        for (int j = 1; j <= rows.extent(2); ++j) v.push_back(rows.at({i, j}));
        vs.push_back(v);
    }
    CHECK(max_abs_diff(wedge(vs, NormalizationMode::Unit), standard_sas(3)) < 1e-10);
}

TEST_CASE("eig and probe verbs") {
    REQUIRE(run_cli("make identity --half-order 1 --dim 3 -o cli_I3.ht").exit_code == 0);
    CliResult e = run_cli("eig sshopm cli_I3.ht --seed 4 -o cli_u.ht");
    REQUIRE(e.exit_code == 0);
    CHECK(e.out.find("lambda 1 ") != std::string::npos);
    CHECK(read_tensor_file("cli_u.ht").order() == 1);

    REQUIRE(run_cli("make identity --half-order 2 --dim 3 -o cli_I4.ht").exit_code == 0);
    CliResult p = run_cli("probe definiteness cli_I4.ht --samples 200 --seed 9");
    REQUIRE(p.exit_code == 0);
    CHECK(p.out.find("verdict positive-definite-evidence") == 0);
}

TEST_CASE("product contract with the identity reproduces the input file") {
    REQUIRE(run_cli("make sas --dim 3 -o cli_q3.ht").exit_code == 0);
    REQUIRE(run_cli("make identity --half-order 1 --dim 3 -o cli_I3m.ht").exit_code == 0);
    CliResult r = run_cli("product contract cli_q3.ht cli_I3m.ht --modes 1 -o cli_q3_again.ht");
    REQUIRE(r.exit_code == 0);
    CHECK(max_abs_diff(read_tensor_file("cli_q3_again.ht"), standard_sas(3)) == 0.0);
}

TEST_CASE("parallel restarts reproduce the serial bytes") {
    REQUIRE(run_cli("make sas --dim 3 -o cli_q3.ht").exit_code == 0);
    std::string args = "rank estimate cli_q3.ht --max-rank 3 --restarts 8 --iters 80 --seed 5 -o ";
    REQUIRE(run_cli(args + "cli_serial.txt").exit_code == 0);
    std::string cmd = "HTENSOR_THREADS=4 " + std::string(HT_CLI_PATH) + " " + args +
                      "cli_parallel.txt > cli_stdout.txt 2> cli_stderr.txt";
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(slurp("cli_serial.txt") == slurp("cli_parallel.txt"));
}

TEST_CASE("rank family counts independent reorderings") {
    write_vector_file("cli_e1.ht", unit_basis(3, 1));
    write_vector_file("cli_e2.ht", unit_basis(3, 2));
    write_vector_file("cli_e3.ht", unit_basis(3, 3));
    CliResult r = run_cli("rank family cli_e1.ht cli_e2.ht cli_e3.ht");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out == "family-rank 6 of 6\n");
}
