// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "mmw/report.hpp"

using namespace mmw;

namespace
{
    std::size_t count(const std::string &text, const std::string &needle)
    {
        std::size_t n = 0;
        for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1))
            ++n;
        return n;
    }

    SweepResult synthetic(std::vector<Method> methods, std::vector<double> values, SweepVariable variable)
    {
        SweepResult r;
        for (double v : values)
            for (Index t = 0; t < 3; ++t)
                for (Method m : methods)
                {
                    SweepRow row;
                    row.method = m;
                    row.variable = variable;
                    row.value = v;
                    row.trial = t;
                    row.nmse_linear = 0.1 / (1.0 + static_cast<double>(t)) / (1.0 + static_cast<int>(m)) / 3.0;
                    row.nmse_db = 10.0 * std::log10(row.nmse_linear);
                    row.iterations = 7 + static_cast<int>(t);
                    row.converged = t != 2;
                    row.wall_ms = 0.1 * static_cast<double>(t);
                    r.rows.push_back(row);
                }
        return r;
    }
}

TEST_CASE("csv", "[report]")
{
    SECTION("empty result is header only")
    {
        CHECK(format_csv({}) == std::string(kCsvHeader) + "\n");
        CHECK(std::string(kCsvHeader) == "method,variable,value,trial,nmse_linear,nmse_db,iterations,converged,wall_ms");
    }

    SECTION("round trip")
    {
        SweepResult r = synthetic({Method::proposed, Method::ls}, {25, 50, 100}, SweepVariable::slots);
        r.rows[1].failed = true;
        r.rows[1].nmse_linear = r.rows[1].nmse_db = std::numeric_limits<double>::quiet_NaN();
        r.rows[3].nmse_linear = 1.0 / 3.0; // needs all 17 digits
        const std::string text = format_csv(r);
        CHECK(text.find('\r') == std::string::npos);
        CHECK(text.back() == '\n');
        const SweepResult back = parse_csv(text);
        REQUIRE(back.rows.size() == r.rows.size());
        for (std::size_t i = 0; i < r.rows.size(); ++i)
        {
            const SweepRow &a = r.rows[i], &b = back.rows[i];
            CHECK(a.method == b.method);
            CHECK(a.variable == b.variable);
            CHECK(a.value == b.value);
            CHECK(a.trial == b.trial);
            CHECK(a.failed == b.failed);
            if (!a.failed)
            {
                CHECK(a.nmse_linear == b.nmse_linear);
                CHECK(a.nmse_db == b.nmse_db);
            }
            CHECK(a.iterations == b.iterations);
            CHECK(a.converged == b.converged);
            CHECK(a.wall_ms == b.wall_ms);
        }
        CHECK(format_csv(back) == text);
    }

    SECTION("file io")
    {
        const auto path = std::filesystem::temp_directory_path() / "mmw_report_test.csv";
        const SweepResult r = synthetic({Method::omp}, {1e3, 1e4}, SweepVariable::eta);
        write_csv(r, path);
        CHECK(format_csv(read_csv(path)) == format_csv(r));
        std::filesystem::remove(path);
        CHECK_THROWS_WITH(read_csv(path), Catch::Matchers::ContainsSubstring(path.string()));
        CHECK_THROWS_WITH(write_csv(r, "/nonexistent-dir/out.csv"),
                          Catch::Matchers::ContainsSubstring("/nonexistent-dir/out.csv"));
    }

    SECTION("malformed input")
    {
        CHECK_THROWS(parse_csv("wrong,header\n"));
        CHECK_THROWS(parse_csv(std::string(kCsvHeader) + "\nls,T,1,0,0.5\n"));
        CHECK_THROWS(parse_csv(std::string(kCsvHeader) + "\nls,T,x,0,0.5,-3,1,1,0\n"));
    }
}

TEST_CASE("svg plot", "[report]")
{
    const SweepResult two = synthetic({Method::proposed, Method::omp}, {0.05, 0.1, 0.2}, SweepVariable::c2);
    const std::string svg = render_svg(two);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(count(svg, "<polyline") == 2);
    CHECK(svg.find("href") == std::string::npos);
    CHECK(svg.find("proposed") != std::string::npos);
    CHECK(svg.find("omp") != std::string::npos);

    const SweepResult four =
        synthetic({Method::proposed, Method::sie, Method::omp, Method::ls}, {1e3, 1e4, 1e5}, SweepVariable::eta);
    CHECK(count(render_svg(four), "<polyline") == 4);

    CHECK(count(render_svg({}), "<polyline") == 0);

    const auto path = std::filesystem::temp_directory_path() / "mmw_report_test.svg";
    write_svg_plot(two, path);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == svg);
    std::filesystem::remove(path);
}

TEST_CASE("trace writer", "[report]")
{
    const auto path = std::filesystem::temp_directory_path() / "mmw_trace_test.csv";
    {
        TraceCsvWriter w(path);
        w({1, 0.5, 0.25, 10.0, -100.0});
        w({2, 0.125, 0.0625, 12.5, -90.5});
    }
    std::ifstream in(path);
    std::string header, first, second;
    std::getline(in, header);
    std::getline(in, first);
    std::getline(in, second);
    CHECK(header == "iteration,delta_mu_h,delta_mu_e,beta,elbo");
    CHECK(first == "1,0.5,0.25,10,-100");
    CHECK(second == "2,0.125,0.0625,12.5,-90.5");
    std::filesystem::remove(path);
}
