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

#include "mmw/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace mmw
{
    namespace
    {
        // Shortest representation that round-trips.
        std::string num(double v)
        {
            std::array<char, 64> buf{};
            auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
            if (ec != std::errc{})
                throw std::runtime_error("failed to format number");
            return std::string(buf.data(), p);
        }

        double parse_double(std::string_view s, int line)
        {
            double v = 0.0;
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc{} || p != s.data() + s.size())
                throw std::runtime_error("csv line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
            return v;
        }

        long long parse_int(std::string_view s, int line)
        {
            long long v = 0;
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc{} || p != s.data() + s.size())
                throw std::runtime_error("csv line " + std::to_string(line) + ": bad integer '" + std::string(s) + "'");
            return v;
        }

        void write_text(const std::string &text, const std::filesystem::path &path)
        {
            std::ofstream out(path, std::ios::binary);
            if (!out)
                throw std::runtime_error("cannot open " + path.string() + " for writing");
            out << text;
            if (!out)
                throw std::runtime_error("write failed for " + path.string());
        }
    }

    std::string format_csv(const SweepResult &result)
    {
        std::string out = kCsvHeader;
        out += '\n';
        for (const auto &r : result.rows)
        {
            out += method_name(r.method);
            out += ',';
            out += variable_name(r.variable);
            out += ',' + num(r.value) + ',' + std::to_string(r.trial) + ',' + num(r.nmse_linear) + ',' +
                   num(r.nmse_db) + ',' + std::to_string(r.iterations) + ',' + (r.converged ? "1" : "0") + ',' +
                   num(r.wall_ms) + '\n';
        }
        return out;
    }

    SweepResult parse_csv(const std::string &text)
    {
        std::istringstream in(text);
        std::string line;
        if (!std::getline(in, line) || line != kCsvHeader)
            throw std::runtime_error("csv: missing or unexpected header");
        SweepResult result;
        int line_no = 1;
        while (std::getline(in, line))
        {
            ++line_no;
            if (line.empty())
                continue;
            std::vector<std::string_view> f;
            std::string_view rest = line;
            while (true)
            {
                const auto c = rest.find(',');
                f.push_back(rest.substr(0, c));
                if (c == std::string_view::npos)
                    break;
                rest = rest.substr(c + 1);
            }
            if (f.size() != 9)
                throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected 9 fields");
            SweepRow r;
            r.method = parse_method(f[0]);
            r.variable = parse_variable(f[1]);
            r.value = parse_double(f[2], line_no);
            r.trial = static_cast<Index>(parse_int(f[3], line_no));
            r.nmse_linear = parse_double(f[4], line_no);
            r.nmse_db = parse_double(f[5], line_no);
            r.iterations = static_cast<int>(parse_int(f[6], line_no));
            r.converged = parse_int(f[7], line_no) != 0;
            r.wall_ms = parse_double(f[8], line_no);
            r.failed = std::isnan(r.nmse_linear);
            result.rows.push_back(r);
        }
        return result;
    }

    void write_csv(const SweepResult &result, const std::filesystem::path &path)
    {
        write_text(format_csv(result), path);
    }

    SweepResult read_csv(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::runtime_error("cannot open " + path.string());
        std::stringstream ss;
        ss << in.rdbuf();
        try
        {
            return parse_csv(ss.str());
        }
        catch (const std::exception &err)
        {
            throw std::runtime_error(path.string() + ": " + err.what());
        }
    }

    std::string render_svg(const SweepResult &result)
    {
        const auto summary = summarize(result);
        constexpr double width = 640, height = 420;
        constexpr double left = 70, right = 150, top = 40, bottom = 60;
        const double plot_w = width - left - right, plot_h = height - top - bottom;

        const bool log_x = !result.rows.empty() && result.rows.front().variable == SweepVariable::eta;
        auto xval = [&](double v) { return log_x ? std::log10(v) : v; };

        double xmin = 0, xmax = 1, ymin = -1, ymax = 0;
        bool first = true;
        for (const auto &s : summary)
        {
            if (s.count == 0)
                continue;
            const double x = xval(s.value);
            const double lo = s.mean_db - s.stderr_db, hi = s.mean_db + s.stderr_db;
            if (first)
            {
                xmin = xmax = x;
                ymin = lo;
                ymax = hi;
                first = false;
            }
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, lo);
            ymax = std::max(ymax, hi);
        }
        if (xmax - xmin <= 0)
        {
            xmin -= 1;
            xmax += 1;
        }
        const double pad = std::max(1.0, 0.05 * (ymax - ymin));
        ymin -= pad;
        ymax += pad;

        auto px = [&](double v) { return left + (xval(v) - xmin) / (xmax - xmin) * plot_w; };
        auto py = [&](double db) { return top + (ymax - db) / (ymax - ymin) * plot_h; };

        std::ostringstream svg;
        svg.precision(6);
        svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
            << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
        svg << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
        svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
            << "\" fill=\"none\" stroke=\"black\"/>\n";

        // y ticks every ~5 dB
        const double ystep = std::max(1.0, std::round((ymax - ymin) / 8.0));
        for (double t = std::ceil(ymin / ystep) * ystep; t <= ymax; t += ystep)
        {
            svg << "<line x1=\"" << left - 4 << "\" y1=\"" << py(t) << "\" x2=\"" << left << "\" y2=\"" << py(t)
                << "\" stroke=\"black\"/>\n";
            svg << "<text x=\"" << left - 8 << "\" y=\"" << py(t) + 4 << "\" text-anchor=\"end\">" << t
                << "</text>\n";
        }
        std::vector<double> xs;
        for (const auto &s : summary)
            if (std::find(xs.begin(), xs.end(), s.value) == xs.end())
                xs.push_back(s.value);
        for (double v : xs)
            svg << "<text x=\"" << px(v) << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">" << v
                << "</text>\n";

        const std::string var = result.rows.empty() ? "" : std::string(variable_name(result.rows.front().variable));
        svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">" << var
            << (log_x ? " (log scale)" : "") << "</text>\n";
        svg << "<text x=\"18\" y=\"" << top + plot_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
            << top + plot_h / 2 << ")\">mean NMSE (dB)</text>\n";

        constexpr std::array<const char *, 4> colors{"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
        std::vector<Method> methods;
        for (const auto &s : summary)
            if (std::find(methods.begin(), methods.end(), s.method) == methods.end())
                methods.push_back(s.method);

        for (std::size_t k = 0; k < methods.size(); ++k)
        {
            const char *color = colors[static_cast<std::size_t>(methods[k]) % colors.size()];
            std::ostringstream pts;
            pts.precision(6);
            for (const auto &s : summary)
            {
                if (s.method != methods[k] || s.count == 0)
                    continue;
                pts << px(s.value) << ',' << py(s.mean_db) << ' ';
                svg << "<line x1=\"" << px(s.value) << "\" y1=\"" << py(s.mean_db - s.stderr_db) << "\" x2=\""
                    << px(s.value) << "\" y2=\"" << py(s.mean_db + s.stderr_db) << "\" stroke=\"" << color
                    << "\"/>\n";
                svg << "<circle cx=\"" << px(s.value) << "\" cy=\"" << py(s.mean_db) << "\" r=\"3\" fill=\""
                    << color << "\"/>\n";
            }
            svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"" << pts.str()
                << "\"/>\n";
            const double ly = top + 16 + 18 * static_cast<double>(k);
            svg << "<rect x=\"" << left + plot_w + 14 << "\" y=\"" << ly - 9 << "\" width=\"14\" height=\"4\" fill=\""
                << color << "\"/>\n";
            svg << "<text x=\"" << left + plot_w + 34 << "\" y=\"" << ly - 3 << "\">" << method_name(methods[k])
                << "</text>\n";
        }
        svg << "</svg>\n";
        return svg.str();
    }

    void write_svg_plot(const SweepResult &result, const std::filesystem::path &path)
    {
        write_text(render_svg(result), path);
    }

    TraceCsvWriter::TraceCsvWriter(const std::filesystem::path &path) : path_(path)
    {
        write_text("iteration,delta_mu_h,delta_mu_e,beta,elbo\n", path_);
    }

    void TraceCsvWriter::operator()(const TraceRow &row)
    {
        std::ofstream out(path_, std::ios::binary | std::ios::app);
        if (!out)
            throw std::runtime_error("cannot append to " + path_.string());
        out << row.iteration << ',' << num(row.delta_mu_h) << ',' << num(row.delta_mu_e) << ',' << num(row.beta_mean)
            << ',' << num(row.elbo) << '\n';
    }
}
