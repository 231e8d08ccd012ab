#include "sepcurv/cli/spec_file.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace sepcurv::cli {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct Entry {
    std::string value;
    std::size_t line = 0;
};

// Keys are read once; anything left over at the end is an unknown key.
class KeyTable {
public:
    void insert(std::string key, Entry entry)
    {
        const std::size_t line = entry.line;
        if (!entries_.emplace(key, std::move(entry)).second) {
            throw SpecError("duplicate key '" + key + "'", line);
        }
    }

    std::optional<Entry> take(const std::string& key)
    {
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            return std::nullopt;
        }
        Entry e = std::move(it->second);
        entries_.erase(it);
        return e;
    }

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    bool has_prefix(std::string_view prefix) const
    {
        for (const auto& [k, v] : entries_) {
            if (std::string_view(k).substr(0, prefix.size()) == prefix) {
                return true;
            }
        }
        return false;
    }

    void reject_leftovers() const
    {
        if (!entries_.empty()) {
            const auto& [k, v] = *entries_.begin();
            throw SpecError("unknown or unused key '" + k + "'", v.line);
        }
    }

private:
    std::map<std::string, Entry> entries_;
};

double parse_real(std::string_view text, std::size_t line)
{
    text = trim(text);
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && text.front() == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (text.empty() || ec != std::errc() || ptr != last || std::isnan(v)) {
        throw SpecError("expected a real number, got '" + std::string(text) + "'", line);
    }
    return v;
}

std::uint64_t parse_unsigned(std::string_view text, std::size_t line)
{
    text = trim(text);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw SpecError("expected a non-negative integer, got '" + std::string(text) + "'", line);
    }
    return v;
}

std::vector<double> parse_list(std::string_view text, std::size_t line)
{
    std::vector<double> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = text.find(',', start);
        out.push_back(parse_real(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start), line));
        if (comma == std::string_view::npos) {
            return out;
        }
        start = comma + 1;
    }
}

Interval parse_interval(const Entry& e)
{
    const auto v = parse_list(e.value, e.line);
    if (v.size() != 2 || !(v[0] < v[1])) {
        throw SpecError("expected an interval 'lo, hi' with lo < hi", e.line);
    }
    return {v[0], v[1]};
}

Function1D parse_function_at(const std::string& expr, Interval domain, std::size_t line)
{
    try {
        return parse_function(expr, domain);
    } catch (const ParseError& err) {
        throw SpecError(std::string("expression '") + expr + "': " + err.what(), line);
    }
}

std::vector<double> list_or(KeyTable& keys, const std::string& key, std::vector<double> fallback)
{
    if (auto e = keys.take(key)) {
        return parse_list(e->value, e->line);
    }
    return fallback;
}

double real_or(KeyTable& keys, const std::string& key, double fallback)
{
    if (auto e = keys.take(key)) {
        return parse_real(e->value, e->line);
    }
    return fallback;
}

Entry require(KeyTable& keys, const std::string& key)
{
    auto e = keys.take(key);
    if (!e) {
        throw SpecError("missing required key '" + key + "'", 0);
    }
    return *e;
}

void expect_length(const std::vector<double>& v, std::size_t n, const std::string& key)
{
    if (v.size() != n) {
        throw SpecError("'" + key + "' needs " + std::to_string(n) + " values, got " + std::to_string(v.size()), 0);
    }
}

FamilySpec parse_family(KeyTable& keys, const Entry& kind_entry, std::size_t n)
{
    const auto kind = parse_family_kind(trim(kind_entry.value));
    if (!kind) {
        throw SpecError("unknown family '" + kind_entry.value + "'", kind_entry.line);
    }
    const std::vector<double> zeros(n, 0.0);
    switch (*kind) {
    case FamilyKind::Hyperplane: {
        HyperplaneSpec s{list_or(keys, "family.coeffs", std::vector<double>(n, 1.0)), real_or(keys, "family.offset", 0.0)};
        expect_length(s.coeffs, n, "family.coeffs");
        return s;
    }
    case FamilyKind::Cylinder: {
        const Entry profile = require(keys, "family.profile");
        Interval domain;
        if (auto d = keys.take("family.profile.domain")) {
            domain = parse_interval(*d);
        }
        std::size_t slot = 0;
        if (auto e = keys.take("family.slot")) {
            slot = parse_unsigned(e->value, e->line);
            if (slot < 1 || slot >= n) {
                throw SpecError("family.slot must be a tangent coordinate in 1..n-1", e->line);
            }
            --slot;
        }
        CylinderSpec s{parse_function_at(profile.value, domain, profile.line), n,
                       list_or(keys, "family.lin", std::vector<double>(n, 1.0)), real_or(keys, "family.offset", 0.0),
                       slot};
        expect_length(s.lin, n, "family.lin");
        return s;
    }
    case FamilyKind::CobbDouglasSqrt: {
        CobbDouglasSqrtSpec s{real_or(keys, "family.A", 1.0), n, list_or(keys, "family.shifts", zeros)};
        expect_length(s.shifts, n, "family.shifts");
        return s;
    }
    case FamilyKind::Hypersphere: {
        HypersphereSpec s{list_or(keys, "family.center", zeros), real_or(keys, "family.radius", 1.0)};
        expect_length(s.center, n, "family.center");
        return s;
    }
    case FamilyKind::LogODE: {
        LogOdeSpec s{real_or(keys, "family.lambda", 1.0), list_or(keys, "family.shifts", zeros),
                     list_or(keys, "family.betas", zeros)};
        expect_length(s.shifts, n, "family.shifts");
        expect_length(s.betas, n, "family.betas");
        return s;
    }
    }
    throw SpecError("unhandled family", kind_entry.line);
}

} // namespace

SurfaceSpec parse_surface_spec(std::string_view text)
{
    KeyTable keys;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        std::string_view line = text.substr(start, end == std::string_view::npos ? text.npos : end - start);
        ++line_no;
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw SpecError("expected 'key = value'", line_no);
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw SpecError("expected 'key = value'", line_no);
        }
        keys.insert(std::string(key), Entry{std::string(value), line_no});
    }

    const Entry version = require(keys, "format_version");
    const auto format_version = parse_unsigned(version.value, version.line);
    if (format_version != kSpecFormatVersion) {
        throw SpecError("unsupported format_version " + version.value, version.line);
    }
    const Entry n_entry = require(keys, "n");
    const std::size_t n = parse_unsigned(n_entry.value, n_entry.line);
    if (n < 3) {
        throw SpecError("n must be at least 3", n_entry.line);
    }

    std::optional<FamilySpec> family;
    std::vector<FunctionEntry> functions;
    std::size_t height = n - 1;
    std::optional<SeparableSurface> surface;
    SamplingBox box;

    const auto family_entry = keys.take("family");
    const bool has_functions = keys.has_prefix("f1") || keys.has("f" + std::to_string(n));
    if (family_entry && has_functions) {
        throw SpecError("give either 'family' or explicit functions f1..fn, not both", family_entry->line);
    }
    if (family_entry) {
        family = parse_family(keys, *family_entry, n);
        try {
            surface = make_family(*family);
        } catch (const std::invalid_argument& e) {
            throw SpecError(std::string("invalid family parameters: ") + e.what(), family_entry->line);
        }
        box = default_sampling_box(*family);
        for (const auto& f : surface->functions()) {
            functions.push_back({f.to_string(), f.domain()});
        }
    } else {
        if (auto h = keys.take("height")) {
            height = parse_unsigned(h->value, h->line);
            if (height < 1 || height > n) {
                throw SpecError("height must be in 1..n", h->line);
            }
            --height;
        }
        std::vector<Function1D> funcs;
        for (std::size_t k = 1; k <= n; ++k) {
            const std::string key = "f" + std::to_string(k);
            auto e = keys.take(key);
            if (!e) {
                throw SpecError("missing function '" + key + "'", 0);
            }
            Interval domain;
            if (auto d = keys.take(key + ".domain")) {
                domain = parse_interval(*d);
            }
            funcs.push_back(parse_function_at(e->value, domain, e->line));
            functions.push_back({e->value, domain});
        }
        surface.emplace(std::move(funcs), height);
        box.ranges.assign(n - 1, Interval{-1.0, 1.0});
    }

    if (auto b = keys.take("bracket")) {
        box.bracket = parse_interval(*b);
    } else if (!family) {
        throw SpecError("missing required key 'bracket'", 0);
    }

    SurfaceSpec spec{.format_version = static_cast<int>(format_version),
                     .n = n,
                     .height = surface->height(),
                     .family = family,
                     .functions = functions,
                     .surface = *surface,
                     .box = box};

    spec.has_sampling = keys.has_prefix("sampling.");
    if (auto e = keys.take("sampling.count")) {
        spec.count = parse_unsigned(e->value, e->line);
    }
    if (auto e = keys.take("sampling.seed")) {
        spec.seed = parse_unsigned(e->value, e->line);
    }
    if (auto e = keys.take("sampling.planes")) {
        spec.planes = parse_unsigned(e->value, e->line);
    }
    if (auto e = keys.take("sampling.range")) {
        spec.box.ranges.assign(n - 1, parse_interval(*e));
    }
    const auto& tangent = spec.surface.tangent_indices();
    for (std::size_t t = 0; t < tangent.size(); ++t) {
        if (auto e = keys.take("sampling.range." + std::to_string(tangent[t] + 1))) {
            spec.box.ranges[t] = parse_interval(*e);
        }
    }
    if (auto e = keys.take("tolerance.constancy")) {
        spec.constancy_tol = parse_real(e->value, e->line);
    }
    if (auto e = keys.take("tolerance.equivalence")) {
        spec.equivalence_tol = parse_real(e->value, e->line);
    }
    if (auto e = keys.take("constk.k")) {
        spec.k_target = parse_real(e->value, e->line);
    }
    if (auto e = keys.take("mesh.grid")) {
        const auto v = parse_list(e->value, e->line);
        if (v.size() != 2 || v[0] < 0 || v[1] < 0 || v[0] != std::floor(v[0]) || v[1] != std::floor(v[1])) {
            throw SpecError("mesh.grid needs two non-negative integers", e->line);
        }
        spec.mesh_grid = std::pair{static_cast<std::size_t>(v[0]), static_cast<std::size_t>(v[1])};
    }
    keys.reject_leftovers();
    return spec;
}

SurfaceSpec load_surface_spec(const std::string& path, std::string* raw_text)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw SpecError("cannot read spec file '" + path + "'", 0);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    if (raw_text) {
        *raw_text = text;
    }
    return parse_surface_spec(text);
}

} // namespace sepcurv::cli
