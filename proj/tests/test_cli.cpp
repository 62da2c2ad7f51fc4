#include "rumorsis/cli.hpp"
#include "rumorsis/model.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace rumorsis;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    args.insert(args.begin(), "rumorsis");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::map<std::string, std::string> summary;

    std::string at(std::size_t row, const std::string& col) const
    {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == col)
                return rows.at(row).at(i);
        throw std::out_of_range("no column " + col);
    }
    double num(std::size_t row, const std::string& col) const { return std::stod(at(row, col)); }
};

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

Csv parse_csv(const std::string& text)
{
    Csv c;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.rfind("# summary ", 0) == 0) {
            const auto colon = line.find(": ");
            c.summary[line.substr(10, colon - 10)] = line.substr(colon + 2);
        } else if (line.rfind('#', 0) == 0) {
            continue;
        } else if (c.header.empty()) {
            c.header = split(line);
        } else {
            c.rows.push_back(split(line));
        }
    }
    return c;
}

const std::vector<std::string> kModel{"--lambda", "2", "--x", "0.3"};

std::vector<std::string> with_model(std::string cmd, std::vector<std::string> extra)
{
    std::vector<std::string> v{std::move(cmd)};
    v.insert(v.end(), kModel.begin(), kModel.end());
    v.insert(v.end(), extra.begin(), extra.end());
    return v;
}

} // namespace

TEST_SUITE("cli steady")
{
    TEST_CASE("full inspection")
    {
        const Result r = run(with_model("steady", {"--alpha", "1"}));
        REQUIRE(r.code == cli::kExitOk);
        const Csv c = parse_csv(r.out);
        REQUIRE(c.rows.size() == 1);
        CHECK(c.num(0, "theta0") == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(c.num(0, "theta1") == 0.0);
        CHECK(c.at(0, "eradicated") == "true");
    }

    TEST_CASE("subcritical is all zeros")
    {
        const Result r = run({"steady", "--lambda", "0.5", "--x", "0.3", "--alpha", "0.5"});
        REQUIRE(r.code == cli::kExitOk);
        const Csv c = parse_csv(r.out);
        for (const char* col : {"theta0", "theta1", "theta", "rho_00_a", "rho_10_a", "rho_00_na", "rho_11_na"})
            CHECK(c.num(0, col) == 0.0);
    }

    TEST_CASE("interior point, 17-digit round trip")
    {
        const Result r = run(with_model("steady", {"--alpha", "0.2"}));
        REQUIRE(r.code == cli::kExitOk);
        const Csv c = parse_csv(r.out);
        const SteadyState ss = full_steady_state(ModelParams::from_lambda(2, 0.3), Allocation::uniform(0.2));
        CHECK(c.num(0, "theta0") == ss.theta0);
        CHECK(c.num(0, "theta1") == ss.theta1);
        CHECK(c.num(0, "rho_11_na") == ss.rho_11_na);
        CHECK(std::abs(c.num(0, "theta0") - 0.0719528298369210368) < 1e-11);
        CHECK(c.num(0, "theta1") == doctest::Approx(0.06));
    }

    TEST_CASE("metadata precedes the header")
    {
        const Result r = run(with_model("steady", {"--alpha", "0.2"}));
        std::istringstream is(r.out);
        std::string l1, l2, l3, l4;
        std::getline(is, l1);
        std::getline(is, l2);
        std::getline(is, l3);
        std::getline(is, l4);
        CHECK(l1 == std::string("# tool: ") + cli::kToolVersion);
        CHECK(l2 == "# command: steady");
        CHECK(l3.rfind("# config: steady --lambda 2 --x 0.29999999999999999 --alpha 0.20000000000000001", 0) == 0);
        CHECK(l4.rfind("lambda,x,alpha,", 0) == 0);
    }

    TEST_CASE("rates instead of lambda")
    {
        const Result r = run({"steady", "--nu", "1", "--k", "1", "--delta", "0.5", "--x", "0.3", "--alpha", "0.2"});
        REQUIRE(r.code == cli::kExitOk);
        CHECK(parse_csv(r.out).num(0, "lambda") == 2.0);
    }
}

TEST_SUITE("cli exit codes")
{
    TEST_CASE("configuration errors exit 2")
    {
        CHECK(run({}).code == cli::kExitConfig);
        CHECK(run({"steady", "--x", "0.3", "--alpha", "0.2"}).code == cli::kExitConfig);
        CHECK(run(with_model("steady", {})).code == cli::kExitConfig);
        CHECK(run(with_model("steady", {"--alpha", "1.5"})).code == cli::kExitConfig);
        CHECK(run(with_model("steady", {"--alpha", "0.2", "--alpha0", "0.1"})).code == cli::kExitConfig);
        CHECK(run({"steady", "--lambda", "2", "--nu", "1", "--x", "0.3", "--alpha", "0.2"}).code == cli::kExitConfig);
        CHECK(run(with_model("steady", {"--alpha", "0.2", "--format", "xml"})).code == cli::kExitConfig);
        CHECK(run(with_model("steady", {"--alpha", "abc"})).code == cli::kExitConfig);
        CHECK(run(with_model("optimize", {"--objective", "truth"})).code == cli::kExitConfig);
        CHECK(run(with_model("optimize", {"--objective", "volume", "--A", "0.1"})).code == cli::kExitConfig);
        CHECK(run(with_model("optimize", {"--objective", "truth-targeted", "--A", "-1"})).code == cli::kExitConfig);
        CHECK(run(with_model("sweep", {"--axis", "alpha", "--steps", "1"})).code == cli::kExitConfig);
        CHECK(run(with_model("sweep", {"--axis", "nu"})).code == cli::kExitConfig);
        CHECK(run(with_model("dynamics", {"--alpha", "0.2", "--starts", "1"})).code == cli::kExitConfig);
        CHECK(run(with_model("steady", {"--alpha", "0.2", "--out", "/nonexistent/dir/file.csv"})).code
              == cli::kExitConfig);
    }

    TEST_CASE("errors carry a message")
    {
        const Result r = run(with_model("steady", {"--alpha", "1.5"}));
        CHECK_FALSE(r.err.empty());
        CHECK(r.out.empty());
    }

    TEST_CASE("numerical failure exits 3")
    {
        const Result r = run(with_model("steady", {"--alpha", "0.2", "--tol", "1e-300"}));
        CHECK(r.code == cli::kExitNumerical);
        CHECK_FALSE(r.err.empty());
    }

    TEST_CASE("help exits 0")
    {
        CHECK(run({"--help"}).code == cli::kExitOk);
    }
}

TEST_SUITE("cli optimize")
{
    TEST_CASE("truth at the eradication budget")
    {
        const Result r = run(with_model("optimize", {"--objective", "truth", "--A", "0.2857142857"}));
        REQUIRE(r.code == cli::kExitOk);
        const Csv c = parse_csv(r.out);
        CHECK(c.at(0, "slack") == "true");
        CHECK(c.at(0, "rumor_eradicated") == "false");
        CHECK(c.num(0, "theta1") > 0.0);
        CHECK(c.num(0, "lambda_bar") == doctest::Approx(2.7559289460184546));
        CHECK(c.num(0, "interval_lo") == doctest::Approx(1.2));
        CHECK(c.num(0, "interval_hi") == doctest::Approx(2.5));
        CHECK(c.num(0, "A_lower") < c.num(0, "A_upper"));
        CHECK(c.num(0, "A_tilde") > c.num(0, "A_upper"));
    }

    TEST_CASE("rumor minimization")
    {
        const Result r = run(with_model("optimize", {"--objective", "rumor-min", "--A", "0.5"}));
        REQUIRE(r.code == cli::kExitOk);
        const Csv c = parse_csv(r.out);
        CHECK(c.num(0, "alpha") == doctest::Approx(2.0 / 7.0));
        CHECK(c.num(0, "budget_spent") == doctest::Approx(2.0 / 7.0));
        CHECK(c.at(0, "rumor_eradicated") == "true");
    }

    TEST_CASE("platform at full budget")
    {
        const Result r = run(with_model("optimize", {"--objective", "platform", "--A", "1"}));
        REQUIRE(r.code == cli::kExitOk);
        const Csv c = parse_csv(r.out);
        CHECK(c.num(0, "alpha") == 1.0);
        CHECK(c.num(0, "value") == doctest::Approx(0.5));
    }

    TEST_CASE("targeted leaves the uniform column empty")
    {
        const Result r = run(with_model("optimize", {"--objective", "truth-targeted", "--A", "0.2"}));
        REQUIRE(r.code == cli::kExitOk);
        const Csv c = parse_csv(r.out);
        CHECK(c.at(0, "alpha").empty());
        CHECK(c.num(0, "alpha0") > 0.0);
    }
}

TEST_SUITE("cli sweep")
{
    TEST_CASE("alpha sweep reproduces the non-monotone truth curve")
    {
        const Result r = run(with_model("sweep", {"--axis", "alpha", "--steps", "501"}));
        REQUIRE(r.code == cli::kExitOk);
        const Csv c = parse_csv(r.out);
        REQUIRE(c.rows.size() == 501);
        CHECK(c.num(0, "alpha") == 0.0);
        CHECK(c.num(500, "alpha") == 1.0);
        CHECK(c.num(0, "theta0") == 0.0);
        CHECK(c.num(500, "theta0") == doctest::Approx(0.5));
        double peak = 0.0;
        for (std::size_t i = 0; i < 501; ++i) {
            const double a = c.num(i, "alpha");
            const double t1 = c.num(i, "theta1");
            CHECK(std::abs(t1 - std::max(0.0, 0.7 * (1.0 - a) - 0.5)) < 1e-12);
            if (a < 2.0 / 7.0)
                peak = std::max(peak, c.num(i, "theta0"));
            else
                CHECK(std::abs(c.num(i, "theta0") - std::max(0.0, 0.7 * a - 0.2)) < 1e-9);
        }
        CHECK(peak > 0.07);
    }

    TEST_CASE("lambda sweep at full inspection")
    {
        const Result r = run({"sweep", "--axis", "lambda", "--x", "0.3", "--alpha", "1", "--start", "1.5", "--stop", "5",
                              "--steps", "8"});
        REQUIRE(r.code == cli::kExitOk);
        const Csv c = parse_csv(r.out);
        REQUIRE(c.rows.size() == 8);
        for (std::size_t i = 0; i < 8; ++i)
            CHECK(c.num(i, "theta0") == doctest::Approx(1.0 - 1.0 / c.num(i, "lambda")).epsilon(1e-13));
    }

    TEST_CASE("x sweep and budget sweep")
    {
        const Result rx = run({"sweep", "--axis", "x", "--lambda", "3", "--alpha", "0.2", "--steps", "5"});
        REQUIRE(rx.code == cli::kExitOk);
        CHECK(parse_csv(rx.out).num(4, "x") == 1.0);

        const Result ra = run(with_model("sweep", {"--axis", "A", "--objective", "platform", "--start", "0.1", "--stop",
                                                   "1", "--steps", "4"}));
        REQUIRE(ra.code == cli::kExitOk);
        const Csv c = parse_csv(ra.out);
        REQUIRE(c.rows.size() == 4);
        CHECK(c.at(0, "objective") == "platform");
        CHECK(c.num(3, "alpha") == 1.0);
    }

    TEST_CASE("jobs do not change the output")
    {
        const auto base = with_model("sweep", {"--axis", "alpha", "--steps", "101"});
        auto one = base;
        one.insert(one.end(), {"--jobs", "1"});
        auto four = base;
        four.insert(four.end(), {"--jobs", "4"});
        CHECK(run(one).out == run(four).out);
    }
}

TEST_SUITE("cli dynamics")
{
    TEST_CASE("stability check at an interior point")
    {
        const Result r = run(with_model("dynamics", {"--alpha", "0.2", "--starts", "8"}));
        REQUIRE(r.code == cli::kExitOk);
        const Csv c = parse_csv(r.out);
        CHECK(c.summary.at("status") == "converged");
        CHECK(c.summary.at("stability_passed") == "true");
        CHECK(std::stod(c.summary.at("max_deviation")) < 1e-6);
        CHECK(std::stod(c.summary.at("stability_max_distance")) < 1e-6);
        CHECK(std::abs(std::stod(c.summary.at("theta0")) - std::stod(c.summary.at("analytic_theta0"))) < 1e-6);
    }

    TEST_CASE("zero seed stays at zero")
    {
        const Result r = run(with_model("dynamics", {"--alpha", "0.2", "--init", "0"}));
        REQUIRE(r.code == cli::kExitOk);
        const Csv c = parse_csv(r.out);
        for (std::size_t i = 0; i < c.rows.size(); ++i)
            for (const char* col : {"r00a", "r00na", "r10a", "r11na"})
                CHECK(c.num(i, col) == 0.0);
    }

    TEST_CASE("full inspection limit")
    {
        const Result r = run(with_model("dynamics", {"--alpha", "1"}));
        REQUIRE(r.code == cli::kExitOk);
        const Csv c = parse_csv(r.out);
        CHECK(std::stod(c.summary.at("theta0")) == doctest::Approx(0.5).epsilon(1e-8));
    }
}

TEST_SUITE("cli output")
{
    TEST_CASE("json mirrors csv")
    {
        const auto args = with_model("optimize", {"--objective", "truth", "--A", "0.1"});
        auto jargs = args;
        jargs.insert(jargs.end(), {"--format", "json"});
        const Csv c = parse_csv(run(args).out);
        const auto j = nlohmann::json::parse(run(jargs).out);
        REQUIRE(j["columns"].size() == c.header.size());
        REQUIRE(j["rows"].size() == 1);
        for (std::size_t i = 0; i < c.header.size(); ++i) {
            const std::string& col = c.header[i];
            CHECK(j["columns"][i] == col);
            const auto& v = j["rows"][0][col];
            const std::string& s = c.rows[0][i];
            if (v.is_null())
                CHECK(s.empty());
            else if (v.is_boolean())
                CHECK(s == (v.get<bool>() ? "true" : "false"));
            else if (v.is_number())
                CHECK(v.get<double>() == std::stod(s));
            else
                CHECK(v.get<std::string>() == s);
        }
        CHECK(j["meta"]["tool"] == cli::kToolVersion);
    }

    TEST_CASE("reruns are byte-identical, including files")
    {
        namespace fs = std::filesystem;
        const fs::path dir = fs::temp_directory_path();
        const fs::path f1 = dir / "rumorsis_det_1.csv";
        const fs::path f2 = dir / "rumorsis_det_2.csv";
        auto base = with_model("dynamics", {"--alpha", "0.2", "--starts", "4", "--seed", "9"});
        auto a = base;
        a.insert(a.end(), {"--out", f1.string()});
        auto b = base;
        b.insert(b.end(), {"--out", f2.string()});
        REQUIRE(run(a).code == cli::kExitOk);
        REQUIRE(run(b).code == cli::kExitOk);
        auto slurp = [](const fs::path& p) {
            std::ifstream in(p, std::ios::binary);
            return std::string(std::istreambuf_iterator<char>(in), {});
        };
        const std::string s1 = slurp(f1);
        CHECK_FALSE(s1.empty());
        CHECK(s1 == slurp(f2));
        fs::remove(f1);
        fs::remove(f2);
    }
}
