#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "realdyn/cli.hpp"

using namespace realdyn;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "realdyn");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    Run r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

bool has(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

std::filesystem::path temp_dir()
{
    auto dir = std::filesystem::temp_directory_path() / "realdyn_cli_test";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("classify")
{
    const auto e = run({"classify", "--family", "exponential", "--params", "2"});
    CHECK(e.code == 0);
    CHECK(has(e.out, "class=real-hyperbolic\n"));
    CHECK(has(e.out, "fate=escaping direction=+"));

    const auto c = run({"classify", "--family", "cosine", "--params", "0,0.5"});
    CHECK(c.code == 0);
    CHECK(has(c.out, "class=hyperbolic\n"));
    CHECK(has(c.out, "singular_values=2\n"));
    CHECK(has(c.out, "fate=attracted period=1"));

    const auto m = run({"classify", "--map", "kind=standard a=1 b=3"});
    CHECK(m.code == 0);
    CHECK(has(m.out, "class=real-hyperbolic"));
}

TEST_CASE("identical arguments give identical output")
{
    const std::vector<std::string> args{"kneading", "--family", "trig", "--params", "1,1,0,0.25", "--depth", "30"};
    const auto a = run(args);
    const auto b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(has(a.out, "A I"));
}

TEST_CASE("validation errors exit with 2")
{
    CHECK(run({"classify", "--family", "cosine", "--params", "0,0"}).code == 2);
    CHECK(run({"classify", "--family", "nope", "--params", "1"}).code == 2);
    CHECK(run({"classify", "--family", "cosine", "--params", "1,x"}).code == 2);
    CHECK(run({"classify", "--bogus"}).code == 2);
    CHECK(run({"rotation", "--family", "trig", "--params", "2,1,0,0.1"}).code == 2);
    CHECK(run({"conjugate", "--family", "trig", "--params", "1,1,0,0.3"}).code == 2);
    CHECK(run({"classify", "--family", "cosine", "--params", "0,0.5", "--max-iter=-1"}).code == 2);
    const auto r = run({"kneading", "--family", "cosine", "--params", "1,0", "--depth", "-1"});
    CHECK(r.code == 2);
    CHECK(has(r.err, "error: "));
    CHECK(has(r.err, "--depth"));
}

TEST_CASE("scan with zero width exits with 2")
{
    const auto spec = temp_dir() / "zero.spec";
    std::ofstream(spec) << "kind=cosine a=0 b=1\nu_param=a u_min=-1 u_max=1\nv_param=b v_min=-1 v_max=1\n"
                           "width=0 height=3\n";
    CHECK(run({"scan", "--spec", spec.string()}).code == 2);
    CHECK(run({"scan", "--spec", (temp_dir() / "missing.spec").string()}).code == 2);
}

TEST_CASE("scan writes the image and CSV")
{
    const auto dir = temp_dir();
    std::ofstream(dir / "small.spec") << "kind=cosine a=0 b=1\nu_param=a u_min=-6 u_max=6\nv_param=b v_min=-6 "
                                         "v_max=6\nwidth=4 height=3\n";
    const auto r = run({"scan", "--spec", (dir / "small.spec").string(), "--out", (dir / "small.pgm").string(), "--csv",
                        (dir / "small.csv").string(), "--workers", "2"});
    CHECK(r.code == 0);
    CHECK(has(r.out, "width=4 height=3\n"));
    CHECK(has(r.err, "workers=2"));
    std::ifstream pgm(dir / "small.pgm", std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(pgm)), std::istreambuf_iterator<char>());
    CHECK(bytes.size() == std::string("P5\n4 3\n255\n").size() + 12);
}

TEST_CASE("conjugate")
{
    const auto r = run({"conjugate", "--rotation", "1/2", "--family", "trig", "--params", "1,1,0,0.3"});
    CHECK(r.code == 0);
    CHECK(has(r.out, "in_delta=false\n"));
    CHECK(has(r.out, "mu=0,-0.3 leakage=0\n"));

    const auto n = run({"conjugate", "--normalize", "--family", "trig", "--params", "3,1,1,1"});
    CHECK(n.code == 0);
    CHECK(has(n.out, "mu=0,"));

    CHECK(has(run({"conjugate", "--with", "1,2", "--family", "cosine", "--params", "1,2"}).out, "affine=found"));
    CHECK(has(run({"conjugate", "--with", "2,1", "--family", "cosine", "--params", "1,2"}).out, "affine=none"));
}

TEST_CASE("rotation, crit and sector")
{
    const auto rot = run({"rotation", "--family", "trig", "--params", "1,1,0.3,0", "--interval"});
    CHECK(rot.code == 0);
    CHECK(has(rot.out, "rho=0.3 "));
    CHECK(has(rot.out, "rho_minus=0.3 rho_plus=0.3"));

    const auto tongue = run({"rotation", "--tongue", "-0.5,0.5,3,0,0.1,2", "-n", "100"});
    CHECK(tongue.code == 0);
    CHECK(has(tongue.out, "mu1,mu2,rho_minus,rho_plus\n"));

    const auto crit = run({"crit", "--family", "trig", "--params", "1,1,0,0.25"});
    CHECK(crit.code == 0);
    CHECK(has(crit.out, "roots=2 on_circle=2 off_circle=0"));
    CHECK(has(crit.out, "critical t=0.3598"));

    const auto line = run({"crit", "--family", "standard", "--params", "1,0"});
    CHECK(line.code == 0);
    CHECK(has(line.out, "critical x=-1 multiplicity=1"));

    const auto sec = run({"sector", "--family", "exponential", "--params", "0", "--test", "log", "--k", "1", "--r", "2"});
    CHECK(sec.code == 0);
    CHECK(has(sec.out, "holds=true\n"));
    const auto vac = run({"sector", "--family", "cosine", "--params", "1,0"});
    CHECK(has(vac.out, "holds=true (vacuous)"));
}

TEST_CASE("numerical failures exit with 3")
{
    // Coefficients spanning 600 orders of magnitude defeat the root finder.
    const auto r = run({"crit", "--family", "trig", "--params", "1,3,0,1e-300,1e300,1e-300,1e300,1e-300"});
    CHECK(r.code == 3);
    CHECK(has(r.err, "error: "));
}
