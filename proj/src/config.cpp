#include "mdsrel/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "mdsrel/csv.hpp"
#include "mdsrel/errors.hpp"

namespace mdsrel
{

namespace
{

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

// key -> (value, line number), per section
using Section = std::map<std::string, std::pair<std::string, int>>;
using Document = std::map<std::string, Section>;

Document tokenize(std::string_view text)
{
    Document doc;
    std::string current;
    std::istringstream is{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(is, raw))
    {
        ++line_no;
        auto hash = raw.find('#');
        std::string line = trim(std::string_view(raw).substr(0, hash));
        if (line.empty())
            continue;
        const std::string where = "line " + std::to_string(line_no);
        if (line.front() == '[')
        {
            if (line.back() != ']')
                throw ConfigError(where + ": malformed section header '" + line + "'");
            current = trim(std::string_view(line).substr(1, line.size() - 2));
            if (doc.count(current))
                throw ConfigError(where + ": duplicate section [" + current + "]");
            doc[current];
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected 'key = value', got '" + line + "'");
        std::string key = trim(std::string_view(line).substr(0, eq));
        std::string value = trim(std::string_view(line).substr(eq + 1));
        if (current.empty())
            throw ConfigError(where + ": key '" + key + "' outside any section");
        if (key.empty())
            throw ConfigError(where + ": empty key");
        auto& section = doc[current];
        if (section.count(key))
            throw ConfigError(where + ": duplicate key " + current + "." + key);
        section[key] = {value, line_no};
    }
    return doc;
}

class SectionReader
{
  public:
    SectionReader(std::string name, const Section& section) : name_(std::move(name)), section_(section) {}

    bool has(const std::string& key) const { return section_.count(key) != 0; }

    std::string full(const std::string& key) const { return name_ + "." + key; }

    const std::string& raw(const std::string& key)
    {
        auto it = section_.find(key);
        if (it == section_.end())
            throw ConfigError("missing required key " + full(key));
        used_.insert(key);
        return it->second.first;
    }

    double number(const std::string& key)
    {
        const auto& v = raw(key);
        try
        {
            double d = parse_double(v);
            if (!std::isfinite(d))
                throw ConfigError("");
            return d;
        }
        catch (const ConfigError&)
        {
            throw ConfigError(full(key) + ": expected a finite number, got '" + v + "'");
        }
    }

    std::int64_t integer(const std::string& key)
    {
        const auto& v = raw(key);
        std::int64_t out = 0;
        auto res = std::from_chars(v.data(), v.data() + v.size(), out);
        if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
            throw ConfigError(full(key) + ": expected an integer, got '" + v + "'");
        return out;
    }

    std::uint64_t unsigned_integer(const std::string& key)
    {
        const auto& v = raw(key);
        std::uint64_t out = 0;
        auto res = std::from_chars(v.data(), v.data() + v.size(), out);
        if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
            throw ConfigError(full(key) + ": expected a non-negative integer, got '" + v + "'");
        return out;
    }

    std::vector<double> list(const std::string& key) { return parse_number_list(raw(key), full(key)); }

    bool boolean(const std::string& key)
    {
        const auto& v = raw(key);
        if (v == "true")
            return true;
        if (v == "false")
            return false;
        throw ConfigError(full(key) + ": expected true or false, got '" + v + "'");
    }

    /// Rejects every key that was never read.
    void finish() const
    {
        for (const auto& [key, value] : section_)
            if (!used_.count(key))
                throw ConfigError("line " + std::to_string(value.second) + ": unknown or inapplicable key " +
                                  full(key));
    }

  private:
    std::string name_;
    const Section& section_;
    std::set<std::string> used_;
};

HazardSection read_hazard(SectionReader r)
{
    HazardSection h;
    const auto& kind = r.raw("kind");
    if (kind == "constant")
    {
        h.kind = HazardKind::Constant;
        h.rate = r.number("rate");
    }
    else if (kind == "weibull")
    {
        h.kind = HazardKind::Weibull;
        h.shape = r.number("shape");
        h.scale = r.number("scale");
    }
    else if (kind == "bathtub")
    {
        h.kind = HazardKind::Bathtub;
        for (const char* key : {"shapes", "scales"})
        {
            if (!r.has(key))
                continue;
            auto values = r.list(key);
            if (values.size() != 3)
                throw ConfigError(r.full(key) + ": expected 3 values, got " + std::to_string(values.size()));
            auto& dst = std::string(key) == "shapes" ? h.shapes : h.scales;
            std::copy(values.begin(), values.end(), dst.begin());
        }
        if (r.has("t1"))
            h.t1 = r.number("t1");
        if (r.has("t2"))
            h.t2 = r.number("t2");
    }
    else if (kind == "tabulated")
    {
        h.kind = HazardKind::Tabulated;
        h.times = r.list("times");
        h.rates = r.list("rates");
    }
    else
    {
        throw ConfigError(r.full("kind") + ": unknown hazard kind '" + kind +
                          "' (expected constant, weibull, bathtub or tabulated)");
    }
    r.finish();
    try
    {
        make_hazard_model(h);
    }
    catch (const DomainError& e)
    {
        throw ConfigError(std::string("hazard: ") + e.what());
    }
    return h;
}

std::vector<MdsCode> read_array(SectionReader r)
{
    const std::string text = r.raw("codes");
    r.finish();
    static const std::regex code_re(R"(\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\))");
    std::vector<MdsCode> codes;
    std::string rest;
    auto begin = std::sregex_iterator(text.begin(), text.end(), code_re);
    std::size_t pos = 0;
    for (auto it = begin; it != std::sregex_iterator(); ++it)
    {
        rest += text.substr(pos, static_cast<std::size_t>(it->position()) - pos);
        pos = static_cast<std::size_t>(it->position() + it->length());
        try
        {
            codes.emplace_back(std::stoll((*it)[1]), std::stoll((*it)[2]));
        }
        catch (const DomainError& e)
        {
            throw ConfigError(r.full("codes") + ": " + e.what());
        }
        catch (const std::out_of_range&)
        {
            throw ConfigError(r.full("codes") + ": code length out of range");
        }
    }
    rest += text.substr(pos);
    if (!trim(rest).empty() && rest.find_first_not_of(" \t,") != std::string::npos)
        throw ConfigError(r.full("codes") + ": expected a list like '(25,15) (12,10)', got '" + text + "'");
    if (codes.empty())
        throw ConfigError(r.full("codes") + ": at least one (n,k) code is required");
    try
    {
        ArrayConfig check(codes);
        (void)check.leaves();
    }
    catch (const std::exception& e)
    {
        throw ConfigError(r.full("codes") + ": " + e.what());
    }
    return codes;
}

GridSection read_grid(SectionReader r)
{
    GridSection g;
    g.start = r.number("start");
    g.end = r.number("end");
    g.points = r.integer("points");
    if (r.has("spacing"))
    {
        const auto& s = r.raw("spacing");
        if (s == "linear")
            g.spacing = Spacing::Linear;
        else if (s == "log")
            g.spacing = Spacing::Log;
        else
            throw ConfigError(r.full("spacing") + ": expected linear or log, got '" + s + "'");
    }
    r.finish();
    if (g.points < 2)
        throw ConfigError(r.full("points") + ": need at least 2 grid points");
    if (g.start < 0.0)
        throw ConfigError(r.full("start") + ": must be >= 0");
    if (!(g.end > g.start))
        throw ConfigError(r.full("end") + ": must exceed grid.start");
    if (g.spacing == Spacing::Log && !(g.start > 0.0))
        throw ConfigError(r.full("start") + ": log spacing requires start > 0");
    return g;
}

SimulationSection read_simulation(SectionReader r)
{
    SimulationSection s;
    s.trials = r.integer("trials");
    if (r.has("seed"))
        s.seed = r.unsigned_integer("seed");
    r.finish();
    if (s.trials < 1)
        throw ConfigError(r.full("trials") + ": must be >= 1");
    return s;
}

AsymptoticSection read_asymptotic(SectionReader r)
{
    AsymptoticSection a;
    if (r.has("q"))
        a.q = r.number("q");
    if (r.has("rates"))
        a.rates = r.list("rates");
    if (r.has("block_lengths"))
    {
        a.block_lengths.clear();
        for (double v : r.list("block_lengths"))
        {
            if (v != std::floor(v) || v < 1 || v > 1e12)
                throw ConfigError(r.full("block_lengths") + ": expected positive integers");
            a.block_lengths.push_back(static_cast<std::int64_t>(v));
        }
    }
    r.finish();
    if (!(a.q > 1.0))
        throw ConfigError(r.full("q") + ": must be > 1");
    for (double rate : a.rates)
        for (auto n : a.block_lengths)
        {
            try
            {
                data_count_for_rate(rate, n);
            }
            catch (const ConfigError& e)
            {
                throw ConfigError(r.full("rates") + ": " + e.what());
            }
        }
    return a;
}

OutputSection read_output(SectionReader r)
{
    OutputSection o;
    if (r.has("path"))
        o.path = r.raw("path");
    if (r.has("loglog"))
        o.loglog = r.boolean("loglog");
    r.finish();
    return o;
}

std::string join(const auto& values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        if (i)
            out += ", ";
        if constexpr (std::is_floating_point_v<std::decay_t<decltype(values[i])>>)
            out += format_double(values[i]);
        else
            out += std::to_string(values[i]);
    }
    return out;
}

} // namespace

std::vector<double> parse_number_list(std::string_view text, std::string_view what)
{
    std::vector<double> out;
    std::string s(text);
    std::size_t pos = 0;
    while (pos <= s.size())
    {
        auto comma = s.find(',', pos);
        std::string cell = trim(std::string_view(s).substr(pos, comma == std::string::npos ? std::string::npos
                                                                                              : comma - pos));
        if (cell.empty())
            throw ConfigError(std::string(what) + ": empty entry in list '" + s + "'");
        try
        {
            double d = parse_double(cell);
            if (!std::isfinite(d))
                throw ConfigError("");
            out.push_back(d);
        }
        catch (const ConfigError&)
        {
            throw ConfigError(std::string(what) + ": expected a finite number, got '" + cell + "'");
        }
        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    return out;
}

std::int64_t data_count_for_rate(double r, std::int64_t n)
{
    if (!(r > 0.0 && r <= 1.0))
        throw ConfigError("rate " + format_double(r) + " is outside (0, 1]");
    const double k = r * static_cast<double>(n);
    const double rounded = std::round(k);
    if (std::abs(k - rounded) > 1e-9 * std::max(1.0, k) || rounded < 1)
        throw ConfigError("rate " + format_double(r) + " gives non-integer k = " + format_double(k) +
                          " for n = " + std::to_string(n));
    return static_cast<std::int64_t>(rounded);
}

RunConfig parse_run_config(std::string_view text)
{
    Document doc = tokenize(text);
    static const std::set<std::string> known{"hazard", "array", "grid", "simulation", "asymptotic", "output"};
    for (const auto& [name, section] : doc)
        if (!known.count(name))
            throw ConfigError("unknown section [" + name + "]");
    for (const char* required : {"hazard", "array", "grid"})
        if (!doc.count(required))
            throw ConfigError(std::string("missing required section [") + required + "]");

    RunConfig cfg;
    cfg.hazard = read_hazard(SectionReader("hazard", doc["hazard"]));
    cfg.codes = read_array(SectionReader("array", doc["array"]));
    cfg.grid = read_grid(SectionReader("grid", doc["grid"]));
    if (doc.count("simulation"))
        cfg.simulation = read_simulation(SectionReader("simulation", doc["simulation"]));
    if (doc.count("asymptotic"))
        cfg.asymptotic = read_asymptotic(SectionReader("asymptotic", doc["asymptotic"]));
    if (doc.count("output"))
        cfg.output = read_output(SectionReader("output", doc["output"]));
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw ConfigError("cannot open config '" + path.string() + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_run_config(ss.str());
}

std::string serialize_run_config(const RunConfig& c)
{
    std::ostringstream os;
    const auto& h = c.hazard;
    os << "[hazard]\n";
    switch (h.kind)
    {
    case HazardKind::Constant:
        os << "kind = constant\nrate = " << format_double(h.rate) << "\n";
        break;
    case HazardKind::Weibull:
        os << "kind = weibull\nshape = " << format_double(h.shape) << "\nscale = " << format_double(h.scale)
           << "\n";
        break;
    case HazardKind::Bathtub:
        os << "kind = bathtub\nshapes = " << join(h.shapes) << "\nscales = " << join(h.scales)
           << "\nt1 = " << format_double(h.t1) << "\nt2 = " << format_double(h.t2) << "\n";
        break;
    case HazardKind::Tabulated:
        os << "kind = tabulated\ntimes = " << join(h.times) << "\nrates = " << join(h.rates) << "\n";
        break;
    }
    os << "\n[array]\ncodes =";
    for (const auto& code : c.codes)
        os << " (" << code.n() << "," << code.k() << ")";
    os << "\n\n[grid]\nstart = " << format_double(c.grid.start) << "\nend = " << format_double(c.grid.end)
       << "\npoints = " << c.grid.points << "\nspacing = " << (c.grid.spacing == Spacing::Log ? "log" : "linear")
       << "\n";
    if (c.simulation)
        os << "\n[simulation]\ntrials = " << c.simulation->trials << "\nseed = " << c.simulation->seed << "\n";
    if (c.asymptotic)
    {
        os << "\n[asymptotic]\nq = " << format_double(c.asymptotic->q) << "\n";
        if (!c.asymptotic->rates.empty())
            os << "rates = " << join(c.asymptotic->rates) << "\n";
        os << "block_lengths = " << join(c.asymptotic->block_lengths) << "\n";
    }
    os << "\n[output]\n";
    if (!c.output.path.empty())
        os << "path = " << c.output.path << "\n";
    os << "loglog = " << (c.output.loglog ? "true" : "false") << "\n";
    return os.str();
}

HazardModelPtr make_hazard_model(const HazardSection& h)
{
    switch (h.kind)
    {
    case HazardKind::Constant:
        return std::make_shared<ConstantHazard>(h.rate);
    case HazardKind::Weibull:
        return std::make_shared<WeibullHazard>(h.shape, h.scale);
    case HazardKind::Bathtub:
        return std::make_shared<CompositeBathtub>(
            std::array<WeibullSegment, 3>{WeibullSegment{h.shapes[0], h.scales[0]},
                                          WeibullSegment{h.shapes[1], h.scales[1]},
                                          WeibullSegment{h.shapes[2], h.scales[2]}},
            h.t1, h.t2);
    case HazardKind::Tabulated:
        return std::make_shared<TabulatedHazard>(h.times, h.rates);
    }
    throw ConfigError("unknown hazard kind");
}

ArrayConfig make_array(const RunConfig& config) { return ArrayConfig(config.codes); }

std::vector<double> make_grid(const GridSection& g)
{
    std::vector<double> x(static_cast<std::size_t>(g.points));
    const double steps = static_cast<double>(g.points - 1);
    for (std::int64_t i = 0; i < g.points; ++i)
    {
        const double f = static_cast<double>(i) / steps;
        x[static_cast<std::size_t>(i)] = g.spacing == Spacing::Log
                                             ? g.start * std::exp(f * std::log(g.end / g.start))
                                             : g.start + f * (g.end - g.start);
    }
    x.front() = g.start;
    x.back() = g.end;
    return x;
}

} // namespace mdsrel
