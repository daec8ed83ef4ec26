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

#include "mmw/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "mmw/disturbance.hpp"

namespace mmw
{
    namespace
    {
        std::string lower(std::string_view s)
        {
            std::string out(s);
            std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
            return out;
        }

        std::string_view trim(std::string_view s)
        {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string_view::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        }
    }

    std::string_view method_name(Method m)
    {
        switch (m)
        {
        case Method::proposed: return "proposed";
        case Method::sie: return "sie";
        case Method::omp: return "omp";
        case Method::ls: return "ls";
        }
        return "?";
    }

    Method parse_method(std::string_view name)
    {
        const std::string n = lower(trim(name));
        if (n == "proposed" || n == "vi")
            return Method::proposed;
        if (n == "sie")
            return Method::sie;
        if (n == "omp")
            return Method::omp;
        if (n == "ls")
            return Method::ls;
        throw ConfigError("unknown method '" + std::string(name) + "' (expected proposed, sie, omp, ls)");
    }

    std::vector<Method> parse_method_list(std::string_view csv)
    {
        std::vector<Method> out;
        std::size_t start = 0;
        while (start <= csv.size())
        {
            const auto comma = csv.find(',', start);
            const auto item = trim(csv.substr(start, comma == std::string_view::npos ? csv.npos : comma - start));
            if (!item.empty())
                out.push_back(parse_method(item));
            if (comma == std::string_view::npos)
                break;
            start = comma + 1;
        }
        return out;
    }

    std::string_view variable_name(SweepVariable v)
    {
        switch (v)
        {
        case SweepVariable::slots: return "T";
        case SweepVariable::p_dbm: return "P_dbm";
        case SweepVariable::c2: return "c2";
        case SweepVariable::eta: return "eta";
        }
        return "?";
    }

    SweepVariable parse_variable(std::string_view name)
    {
        const std::string n = lower(trim(name));
        if (n == "t" || n == "slots")
            return SweepVariable::slots;
        if (n == "p_dbm" || n == "p")
            return SweepVariable::p_dbm;
        if (n == "c2")
            return SweepVariable::c2;
        if (n == "eta")
            return SweepVariable::eta;
        throw ConfigError("unknown sweep variable '" + std::string(name) + "' (expected T, P_dbm, c2, eta)");
    }

    double SystemConfig::noise_variance_watt() const
    {
        return NoiseConfig{psd_dbm_per_hz, bandwidth_hz}.variance_watt();
    }

    double SystemConfig::pilot_power_watt() const { return dbm_to_watt(p_dbm_per_antenna); }

    void SystemConfig::validate() const
    {
        auto need = [](bool ok, const std::string &msg) {
            if (!ok)
                throw ConfigError(msg);
        };
        need(n_t >= 1 && n_r >= 1, "n_t and n_r must be >= 1");
        need(d_u >= n_r, "d_u must be >= n_r");
        need(d_b >= n_t, "d_b must be >= n_t");
        need(slots >= 1, "t must be >= 1");
        need(paths >= 1, "l must be >= 1");
        need(trials >= 1, "trials must be >= 1");
        need(spacing_over_wavelength > 0.0, "spacing must be > 0");
        need(fc_hz > 0.0 && bandwidth_hz > 0.0 && distance_m > 0.0,
             "fc_hz, bandwidth_hz and distance_m must be > 0");
        need(std::isfinite(psd_dbm_per_hz) && std::isfinite(p_dbm_per_antenna), "powers must be finite");
        need(c2 >= 0.0 && c2 < 1.0, "c2 must lie in [0, 1)");
        need(eta > 0.0, "eta must be > 0");
        need(!omp_sparsity || (*omp_sparsity >= 0 && *omp_sparsity <= d_u * d_b),
             "omp_k must lie in [0, d_u * d_b]");
    }

    SystemConfig desk_preset()
    {
        SystemConfig c;
        c.n_t = 8;
        c.n_r = 2;
        c.d_u = 4;
        c.d_b = 16;
        c.slots = 50;
        c.trials = 50;
        return c;
    }

    SystemConfig preset_by_name(std::string_view name)
    {
        const std::string n = lower(trim(name));
        if (n == "desk")
            return desk_preset();
        if (n == "default" || n == "full")
            return SystemConfig{};
        throw ConfigError("unknown preset '" + std::string(name) + "' (expected desk or default)");
    }

    void SweepSpec::validate() const
    {
        if (values.empty())
            throw ConfigError("sweep values must not be empty");
        if (values.size() > 1)
        {
            const bool up = values[1] > values[0];
            for (std::size_t i = 1; i < values.size(); ++i)
                if (up ? !(values[i] > values[i - 1]) : !(values[i] < values[i - 1]))
                    throw ConfigError("sweep values must be strictly monotone");
        }
        if (methods.empty())
            throw ConfigError("sweep needs at least one method");
        for (std::size_t i = 0; i < methods.size(); ++i)
            for (std::size_t j = i + 1; j < methods.size(); ++j)
                if (methods[i] == methods[j])
                    throw ConfigError("method '" + std::string(method_name(methods[i])) + "' listed twice");
    }

    SystemConfig apply_sweep_value(SystemConfig cfg, SweepVariable variable, double value)
    {
        switch (variable)
        {
        case SweepVariable::slots:
            if (!(value >= 1.0) || value != std::floor(value))
                throw ConfigError("T sweep values must be positive integers");
            cfg.slots = static_cast<Index>(value);
            break;
        case SweepVariable::p_dbm: cfg.p_dbm_per_antenna = value; break;
        case SweepVariable::c2: cfg.c2 = value; break;
        case SweepVariable::eta: cfg.eta = value; break;
        }
        cfg.validate();
        return cfg;
    }

    namespace
    {
        struct Entry
        {
            std::string section;
            std::string key;
            std::string value;
            int line = 0;
        };

        [[noreturn]] void fail(const Entry &e, const std::string &msg)
        {
            throw ConfigError("config line " + std::to_string(e.line) + ", key '" + e.key + "': " + msg);
        }

        double to_double(const Entry &e, std::string_view text)
        {
            text = trim(text);
            double v = 0.0;
            const auto *end = text.data() + text.size();
            auto [p, ec] = std::from_chars(text.data(), end, v);
            if (ec != std::errc{} || p != end || text.empty() || !std::isfinite(v))
                fail(e, "expected a real number, got '" + std::string(text) + "'");
            return v;
        }

        Index to_index(const Entry &e)
        {
            const auto text = trim(e.value);
            long long v = 0;
            const auto *end = text.data() + text.size();
            auto [p, ec] = std::from_chars(text.data(), end, v);
            if (ec != std::errc{} || p != end || text.empty())
                fail(e, "expected an integer, got '" + e.value + "'");
            return static_cast<Index>(v);
        }

        std::uint64_t to_u64(const Entry &e)
        {
            const auto text = trim(e.value);
            std::uint64_t v = 0;
            const auto *end = text.data() + text.size();
            auto [p, ec] = std::from_chars(text.data(), end, v);
            if (ec != std::errc{} || p != end || text.empty())
                fail(e, "expected an unsigned 64-bit integer, got '" + e.value + "'");
            return v;
        }

        bool to_bool(const Entry &e)
        {
            const std::string v = lower(trim(e.value));
            if (v == "true" || v == "1" || v == "yes" || v == "on")
                return true;
            if (v == "false" || v == "0" || v == "no" || v == "off")
                return false;
            fail(e, "expected a boolean, got '" + e.value + "'");
        }

        Index positive_index(const Entry &e)
        {
            const Index v = to_index(e);
            if (v < 1)
                fail(e, "must be >= 1");
            return v;
        }

        double positive_double(const Entry &e)
        {
            const double v = to_double(e, e.value);
            if (!(v > 0.0))
                fail(e, "must be > 0");
            return v;
        }

        std::vector<double> to_list(const Entry &e)
        {
            std::vector<double> out;
            std::string_view s = e.value;
            std::size_t start = 0;
            while (true)
            {
                const auto comma = s.find(',', start);
                const auto item = s.substr(start, comma == std::string_view::npos ? s.npos : comma - start);
                out.push_back(to_double(e, item));
                if (comma == std::string_view::npos)
                    break;
                start = comma + 1;
            }
            return out;
        }

        using Setter = std::function<void(ExperimentConfig &, const Entry &)>;

        const std::map<std::string, Setter> &system_keys()
        {
            static const std::map<std::string, Setter> keys{
                {"n_t", [](auto &c, const Entry &e) { c.system.n_t = positive_index(e); }},
                {"n_r", [](auto &c, const Entry &e) { c.system.n_r = positive_index(e); }},
                {"d_u", [](auto &c, const Entry &e) { c.system.d_u = positive_index(e); }},
                {"d_b", [](auto &c, const Entry &e) { c.system.d_b = positive_index(e); }},
                {"t", [](auto &c, const Entry &e) { c.system.slots = positive_index(e); }},
                {"l", [](auto &c, const Entry &e) { c.system.paths = positive_index(e); }},
                {"spacing", [](auto &c, const Entry &e) { c.system.spacing_over_wavelength = positive_double(e); }},
                {"fc_hz", [](auto &c, const Entry &e) { c.system.fc_hz = positive_double(e); }},
                {"bandwidth_hz", [](auto &c, const Entry &e) { c.system.bandwidth_hz = positive_double(e); }},
                {"distance_m", [](auto &c, const Entry &e) { c.system.distance_m = positive_double(e); }},
                {"psd_dbm_per_hz", [](auto &c, const Entry &e) { c.system.psd_dbm_per_hz = to_double(e, e.value); }},
                {"p_dbm", [](auto &c, const Entry &e) { c.system.p_dbm_per_antenna = to_double(e, e.value); }},
                {"c2",
                 [](auto &c, const Entry &e) {
                     const double v = to_double(e, e.value);
                     if (!(v >= 0.0 && v < 1.0))
                         fail(e, "must lie in [0, 1)");
                     c.system.c2 = v;
                 }},
                {"eta", [](auto &c, const Entry &e) { c.system.eta = positive_double(e); }},
                {"on_grid", [](auto &c, const Entry &e) { c.system.on_grid = to_bool(e); }},
                {"noiseless", [](auto &c, const Entry &e) { c.system.noiseless = to_bool(e); }},
                {"seed", [](auto &c, const Entry &e) { c.system.seed = to_u64(e); }},
                {"trials", [](auto &c, const Entry &e) { c.system.trials = positive_index(e); }},
                {"omp_k",
                 [](auto &c, const Entry &e) {
                     const Index k = to_index(e);
                     if (k < 0)
                         fail(e, "must be >= 0");
                     c.system.omp_sparsity = k;
                 }},
            };
            return keys;
        }

        const std::map<std::string, Setter> &hyper_keys()
        {
            static const std::map<std::string, Setter> keys{
                {"a", [](auto &c, const Entry &e) { c.hyper.a = positive_double(e); }},
                {"b", [](auto &c, const Entry &e) { c.hyper.b = positive_double(e); }},
                {"eps_h", [](auto &c, const Entry &e) { c.hyper.eps_h = positive_double(e); }},
                {"eps_e", [](auto &c, const Entry &e) { c.hyper.eps_e = positive_double(e); }},
                {"max_iters",
                 [](auto &c, const Entry &e) { c.hyper.max_iters = static_cast<int>(positive_index(e)); }},
                {"normalize", [](auto &c, const Entry &e) { c.hyper.normalize = to_bool(e); }},
            };
            return keys;
        }

        const std::map<std::string, Setter> &sweep_keys()
        {
            static const std::map<std::string, Setter> keys{
                {"variable",
                 [](auto &c, const Entry &e) {
                     try
                     {
                         c.sweep.variable = parse_variable(e.value);
                     }
                     catch (const ConfigError &err)
                     {
                         fail(e, err.what());
                     }
                 }},
                {"values", [](auto &c, const Entry &e) { c.sweep.values = to_list(e); }},
                {"methods",
                 [](auto &c, const Entry &e) {
                     try
                     {
                         c.sweep.methods = parse_method_list(e.value);
                     }
                     catch (const ConfigError &err)
                     {
                         fail(e, err.what());
                     }
                 }},
                {"record_wall_time", [](auto &c, const Entry &e) { c.sweep.record_wall_time = to_bool(e); }},
            };
            return keys;
        }
    }

    ExperimentConfig parse_config_text(std::string_view text, ExperimentConfig base)
    {
        std::vector<Entry> entries;
        std::string section;
        std::istringstream in{std::string(text)};
        std::string raw;
        int line_no = 0;
        while (std::getline(in, raw))
        {
            ++line_no;
            std::string_view line = raw;
            if (const auto hash = line.find('#'); hash != std::string_view::npos)
                line = line.substr(0, hash);
            line = trim(line);
            if (line.empty() || line.front() == ';')
                continue;
            if (line.front() == '[')
            {
                if (line.back() != ']')
                    throw ConfigError("config line " + std::to_string(line_no) + ": malformed section header");
                section = lower(trim(line.substr(1, line.size() - 2)));
                if (section != "system" && section != "hyper" && section != "sweep")
                    throw ConfigError("config line " + std::to_string(line_no) + ": unknown section [" + section +
                                      "]");
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string_view::npos)
                throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
            if (section.empty())
                throw ConfigError("config line " + std::to_string(line_no) + ": key outside of any section");
            entries.push_back({section, lower(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))),
                               line_no});
        }

        ExperimentConfig cfg = std::move(base);
        bool has_du = false, has_db = false, has_nr = false, has_nt = false;
        // A preset replaces the system section wholesale, so it is applied first.
        for (const auto &e : entries)
            if (e.section == "system" && e.key == "preset")
            {
                try
                {
                    const auto seed = cfg.system.seed;
                    cfg.system = preset_by_name(e.value);
                    cfg.system.seed = seed;
                }
                catch (const ConfigError &err)
                {
                    fail(e, err.what());
                }
            }

        for (const auto &e : entries)
        {
            if (e.section == "system" && e.key == "preset")
                continue;
            const auto &table = e.section == "system" ? system_keys()
                                : e.section == "hyper" ? hyper_keys()
                                                       : sweep_keys();
            const auto it = table.find(e.key);
            if (it == table.end())
                fail(e, "unknown key in [" + e.section + "]");
            it->second(cfg, e);
            if (e.section == "system")
            {
                has_du |= e.key == "d_u";
                has_db |= e.key == "d_b";
                has_nr |= e.key == "n_r";
                has_nt |= e.key == "n_t";
            }
        }
        // Dictionary sizes follow the array sizes unless pinned explicitly.
        if (has_nr && !has_du)
            cfg.system.d_u = 2 * cfg.system.n_r;
        if (has_nt && !has_db)
            cfg.system.d_b = 2 * cfg.system.n_t;

        try
        {
            cfg.system.validate();
            cfg.hyper.validate();
            cfg.sweep.validate();
        }
        catch (const std::exception &err)
        {
            throw ConfigError(std::string("config: ") + err.what());
        }
        return cfg;
    }

    ExperimentConfig parse_config(const std::filesystem::path &path, ExperimentConfig base)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot read config file " + path.string());
        std::stringstream ss;
        ss << in.rdbuf();
        try
        {
            return parse_config_text(ss.str(), std::move(base));
        }
        catch (const ConfigError &err)
        {
            throw ConfigError(path.string() + ": " + err.what());
        }
    }
}
