#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "realdyn/cli.hpp"
#include "realdyn/conjugacy.hpp"
#include "realdyn/scan.hpp"
#include "realdyn/symbolic.hpp"
#include "realdyn/text_format.hpp"

using namespace realdyn;

namespace {

std::string cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "realdyn");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    REQUIRE(run_cli(static_cast<int>(argv.size()), argv.data(), out, err) == 0);
    return out.str();
}

}  // namespace

TEST_CASE("scan cells agree with the command-line classifier")
{
    const auto spec = parse_scan_spec("kind=cosine a=0 b=1\n"
                                      "u_param=a u_min=-6 u_max=6\n"
                                      "v_param=b v_min=-6 v_max=6\n"
                                      "width=4 height=4\n");
    const auto result = run_scan(spec, 3);
    for (int j = 0; j < spec.height; ++j) {
        for (int i = 0; i < spec.width; ++i) {
            const auto f = result.family_at(i, j);
            const auto& p = f.as<CosineParams>();
            const auto out = cli({"classify", "--family", "cosine", "--params",
                                  format_number(p.a) + "," + format_number(p.b)});
            CHECK(out.find("class=" + std::string(to_string(result.at(i, j).cls)) + "\n") != std::string::npos);
        }
    }
}

TEST_CASE("a Fig. 1 style cell through spec text, scan, kneading and rotation")
{
    const auto spec = parse_scan_spec("kind=trig_lift D=1 m=1 mu=0,0\n"
                                      "u_param=mu1 u_min=-0.5 u_max=0.5\n"
                                      "v_param=mu2 v_min=0 v_max=0.5\n"
                                      "width=1 height=1\n");
    const auto result = run_scan(spec, 1);
    REQUIRE(result.cells[0].cls == CellClass::Hyperbolic);

    const auto f = result.family_at(0, 0);
    const auto k = kneading(f, 20);
    REQUIRE(k.entries.size() == 2);
    for (const auto& e : k.entries)
        CHECK(e.fate.tag == FateTag::Attracted);

    const auto beta = RotationAngle::rational(1, 1);
    const auto& mu = f.as<TrigLiftParams>().mu;
    const auto c = conjugate_by_rotation(1, 1, mu, beta);
    const auto g = FamilyMap::trig_lift(1, 1, c.mu);
    CHECK(kneading_equal(k, kneading(g, 20), induced_rotation_marking(f, g, beta.value())));

    // The attracting fixed point pins the rotation interval at 0.
    const auto rot = cli({"rotation", "--family", "trig", "--params", "1,1,0,0.25", "--interval", "-n", "10000"});
    CHECK(rot.find("rho_minus=") != std::string::npos);
    CHECK(rot.find("monotone=false") != std::string::npos);
}

TEST_CASE("command-line kneading matches the library")
{
    const auto f = FamilyMap::cosine(2.5, -1.0);
    const auto text = cli({"kneading", "--family", "cosine", "--params", "2.5,-1", "--depth", "12"});
    CHECK(text.find(format_kneading(kneading(f, 12))) != std::string::npos);
}
