#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gasket/fields.hpp"
#include "gasket/graph.hpp"
#include "gasket/io.hpp"
#include "gasket/spectral.hpp"

using namespace gasket;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

long count_lines(const std::string& s) {
    long n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("gasket-io-test-" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("vertex csv") {
    const GasketGraph g2 = build_graph(2);
    const std::string csv = io::graph_vertex_csv(g2);
    CHECK(count_lines(csv) == 16);  // header + 15 vertices
    CHECK(csv.rfind("index,addr,x_num,x_den,y_num,y_den,boundary\n", 0) == 0);

    // corner p1 = origin reduces to 0/1, and top corner p3 = e2 reduces to
    // x=0/1, y=1/1 regardless of level
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);  // header
    bool saw_origin = false, saw_top = false;
    while (std::getline(lines, line)) {
        if (line.find(",0,1,0,1,1") != std::string::npos) saw_origin = true;
        if (line.find(",0,1,1,1,1") != std::string::npos) saw_top = true;
    }
    CHECK(saw_origin);
    CHECK(saw_top);
}

TEST_CASE("dyadic reduction is exact across levels") {
    for (int m : {1, 3}) {
        const GasketGraph g = build_graph(m);
        const std::string csv = io::graph_vertex_csv(g);
        std::istringstream lines(csv);
        std::string line;
        std::getline(lines, line);
        while (std::getline(lines, line)) {
            std::istringstream row(line);
            std::string cell;
            std::vector<std::string> cells;
            while (std::getline(row, cell, ',')) cells.push_back(cell);
            REQUIRE(cells.size() == 7);
            const long long xn = std::stoll(cells[2]), xd = std::stoll(cells[3]);
            const long long yn = std::stoll(cells[4]), yd = std::stoll(cells[5]);
            CHECK(xd > 0);
            CHECK(yd > 0);
            CHECK((xn % 2 != 0 || xd == 1));  // lowest terms
            CHECK((yn % 2 != 0 || yd == 1));
            const int idx = std::stoi(cells[0]);
            // value check against the raw lattice coordinates
            CHECK(static_cast<double>(xn) / static_cast<double>(xd) ==
                  std::ldexp(static_cast<double>(g.x[static_cast<std::size_t>(idx)]), -m));
            CHECK(static_cast<double>(yn) / static_cast<double>(yd) ==
                  std::ldexp(static_cast<double>(g.y[static_cast<std::size_t>(idx)]), -m));
        }
    }
}

TEST_CASE("edge csv") {
    const GasketGraph g1 = build_graph(1);
    const std::string csv = io::graph_edge_csv(g1);
    CHECK(count_lines(csv) == 10);  // header + 9 edges
    for (const auto& [i, j] : g1.edges) CHECK(i < j);
}

TEST_CASE("spectrum and eigenvector csv") {
    const SpectralDecomposition spec = eigendecompose(assemble_dirichlet_laplacian(build_graph(1)));
    const std::string s = io::spectrum_csv(spec);
    CHECK(count_lines(s) == 4);
    // first data row: level 1, index 1, eigenvalue 10 (up to solver roundoff)
    std::istringstream rows(s);
    std::string line;
    std::getline(rows, line);
    std::getline(rows, line);
    CHECK(line.rfind("1,1,", 0) == 0);
    CHECK(std::stod(line.substr(4)) == doctest::Approx(10.0).epsilon(1e-12));

    const std::string v = io::eigenvector_csv(spec);
    CHECK(v.find("# level=1 N=3") != std::string::npos);
    CHECK(count_lines(v) == 5);  // comment + header + 3 rows
}

TEST_CASE("field csv records parameters") {
    const SpectralDecomposition spec = eigendecompose(assemble_dirichlet_laplacian(build_graph(1)));
    const FieldSample f = sample_dfgf(spec, 0.5, 42);
    const std::string csv = io::field_csv(f);
    CHECK(csv.find("# m=1 s=0.5 seed=42") != std::string::npos);
    CHECK(count_lines(csv) == 8);  // comment + header + 6 vertices
}

TEST_CASE("xy csv") {
    CHECK_THROWS(io::xy_csv({1.0, 2.0}, {1.0}, "x", "y"));
    const std::string csv = io::xy_csv({0.5}, {0.25}, "r", "S");
    CHECK(csv == "r,S\n0.5,0.25\n");
}

TEST_CASE("atomic write") {
    TempDir tmp;

    SUBCASE("creates missing directories and leaves no temp file") {
        const fs::path target = tmp.path / "a" / "b" / "out.csv";
        io::atomic_write(target, "hello\n");
        CHECK(slurp(target) == "hello\n");
        CHECK(!fs::exists(target.string() + ".tmp"));
    }

    SUBCASE("overwrite replaces content completely") {
        const fs::path target = tmp.path / "out.txt";
        io::atomic_write(target, "long first content\n");
        io::atomic_write(target, "x\n");
        CHECK(slurp(target) == "x\n");
    }
}

TEST_CASE("config parser") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "run.cfg";

    SUBCASE("values, comments, whitespace") {
        io::atomic_write(cfg, "# run settings\nlevel_cap = 9\n  seed=17 # inline\n\ns = 0.5\n");
        const auto map = io::parse_config(cfg);
        CHECK(map.size() == 3);
        CHECK(map.at("level_cap") == "9");
        CHECK(map.at("seed") == "17");
        CHECK(map.at("s") == "0.5");
    }

    SUBCASE("missing '=' is an error") {
        io::atomic_write(cfg, "not a pair\n");
        CHECK_THROWS(io::parse_config(cfg));
    }

    SUBCASE("missing file is an error") {
        CHECK_THROWS(io::parse_config(tmp.path / "nope.cfg"));
    }
}

TEST_CASE("format_double round-trips") {
    for (double v : {0.0, 1.5, -3.25, 0.1, 1e-17, 12345.678901234567}) {
        const std::string s = io::format_double(v);
        CHECK(std::stod(s) == v);
    }
}
