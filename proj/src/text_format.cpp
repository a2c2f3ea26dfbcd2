#include "realdyn/text_format.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <regex>

#include "realdyn/error.hpp"

namespace realdyn {

namespace {

std::string_view trim(std::string_view s, std::string_view chars = " \t\r\n,;")
{
    const auto b = s.find_first_not_of(chars);
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(chars);
    return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

double to_double(std::string_view s)
{
    s = trim(s, " \t\r\n");
    double v = 0.0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    if (!s.empty() && *first == '+')
        ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || s.empty())
        parse_fail("malformed number '" + std::string(s) + "'");
    return v;
}

}  // namespace

Assignments parse_assignments(std::string_view text)
{
    std::string cleaned;
    cleaned.reserve(text.size());
    bool comment = false;
    for (char ch : text) {
        if (ch == '#')
            comment = true;
        else if (ch == '\n')
            comment = false;
        cleaned.push_back(comment ? ' ' : ch);
    }

    static const std::regex key_re(R"(([A-Za-z_][A-Za-z0-9_]*)\s*=)");
    std::vector<std::pair<std::string, std::size_t>> keys;  // key, value start
    std::vector<std::pair<std::size_t, std::size_t>> spans;  // match start, match end
    for (auto it = std::sregex_iterator(cleaned.begin(), cleaned.end(), key_re); it != std::sregex_iterator(); ++it) {
        const auto pos = static_cast<std::size_t>(it->position(0));
        // A key must start a token.
        if (pos > 0 && !std::isspace(static_cast<unsigned char>(cleaned[pos - 1])) && cleaned[pos - 1] != ','
            && cleaned[pos - 1] != ';')
            continue;
        keys.emplace_back((*it)[1].str(), pos + static_cast<std::size_t>(it->length(0)));
        spans.emplace_back(pos, pos + static_cast<std::size_t>(it->length(0)));
    }
    if (keys.empty()) {
        if (!trim(cleaned).empty())
            parse_fail("expected key=value assignments, got '" + std::string(trim(cleaned)) + "'");
        return {};
    }
    if (!trim(std::string_view(cleaned).substr(0, spans.front().first)).empty())
        parse_fail("text before the first key=value assignment");

    Assignments out;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        const auto begin = keys[i].second;
        const auto end = i + 1 < keys.size() ? spans[i + 1].first : cleaned.size();
        auto value = trim(std::string_view(cleaned).substr(begin, end - begin));
        for (const auto& [k, v] : out) {
            if (k == keys[i].first)
                parse_fail("duplicate key '" + k + "'");
        }
        out.emplace_back(keys[i].first, std::string(value));
    }
    return out;
}

double parse_number(std::string_view text)
{
    text = trim(text, " \t\r\n");
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const double num = to_double(text.substr(0, slash));
        const double den = to_double(text.substr(slash + 1));
        if (den == 0.0)
            parse_fail("zero denominator in '" + std::string(text) + "'");
        return num / den;
    }
    return to_double(text);
}

std::vector<double> parse_number_list(std::string_view text)
{
    std::vector<double> out;
    text = trim(text, " \t\r\n");
    if (text.empty())
        return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        out.push_back(parse_number(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

std::string format_number(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

FamilyKind parse_kind(std::string_view name)
{
    static const std::map<std::string, FamilyKind, std::less<>> names{
        {"trig", FamilyKind::TrigLift},
        {"trig_lift", FamilyKind::TrigLift},
        {"arnold", FamilyKind::TrigLift},
        {"cosine", FamilyKind::Cosine},
        {"standard", FamilyKind::StandardDeg},
        {"standard_deg", FamilyKind::StandardDeg},
        {"exponential", FamilyKind::Exponential},
        {"exp", FamilyKind::Exponential},
        {"integral_pe", FamilyKind::IntegralPE},
    };
    const auto it = names.find(trim(name, " \t\r\n"));
    if (it == names.end())
        parse_fail("unknown family '" + std::string(name) + "'");
    return it->second;
}

namespace {

int to_int(std::string_view s)
{
    const double v = parse_number(s);
    if (v != std::floor(v) || std::abs(v) > 1e6)
        parse_fail("expected an integer, got '" + std::string(s) + "'");
    return static_cast<int>(v);
}

}  // namespace

FamilyMap family_from_assignments(const Assignments& kv)
{
    std::map<std::string, std::string, std::less<>> m(kv.begin(), kv.end());
    const auto take = [&](std::string_view key) -> std::string {
        const auto it = m.find(key);
        if (it == m.end())
            parse_fail("missing key '" + std::string(key) + "'");
        std::string v = it->second;
        m.erase(it);
        return v;
    };
    const auto take_or = [&](std::string_view key, double fallback) {
        return m.count(key) ? parse_number(take(key)) : fallback;
    };

    const FamilyKind kind = parse_kind(take("kind"));
    auto build = [&]() -> FamilyMap {
        switch (kind) {
        case FamilyKind::TrigLift: {
            const int degree = to_int(take("D"));
            const int modality = to_int(take("m"));
            return FamilyMap::trig_lift(degree, modality, parse_number_list(take("mu")));
        }
        case FamilyKind::Cosine: {
            const double a = parse_number(take("a"));
            return FamilyMap::cosine(a, parse_number(take("b")));
        }
        case FamilyKind::StandardDeg: {
            const double a = parse_number(take("a"));
            return FamilyMap::standard(a, parse_number(take("b")));
        }
        case FamilyKind::Exponential: return FamilyMap::exponential(parse_number(take("a")));
        case FamilyKind::IntegralPE: {
            auto p = parse_number_list(take("P"));
            auto q = parse_number_list(take("Q"));
            const double c = take_or("c", 0.0);
            const double x0 = take_or("x0", 0.0);
            return FamilyMap::integral_pe(std::move(p), std::move(q), c, x0);
        }
        }
        parse_fail("unreachable family kind");
    };
    FamilyMap f = build();
    if (!m.empty())
        parse_fail("unexpected key '" + m.begin()->first + "' for family " + std::string(to_string(kind)));
    return f;
}

FamilyMap parse_family(std::string_view text) { return family_from_assignments(parse_assignments(text)); }

std::string format_family(const FamilyMap& f)
{
    const auto list = [](const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i)
                s += ',';
            s += format_number(v[i]);
        }
        return s;
    };
    std::string out = "kind=" + std::string(to_string(f.kind()));
    switch (f.kind()) {
    case FamilyKind::TrigLift: {
        const auto& p = f.as<TrigLiftParams>();
        out += " D=" + std::to_string(p.degree) + " m=" + std::to_string(p.modality) + " mu=" + list(p.mu);
        break;
    }
    case FamilyKind::Cosine: {
        const auto& p = f.as<CosineParams>();
        out += " a=" + format_number(p.a) + " b=" + format_number(p.b);
        break;
    }
    case FamilyKind::StandardDeg: {
        const auto& p = f.as<StandardDegParams>();
        out += " a=" + format_number(p.a) + " b=" + format_number(p.b);
        break;
    }
    case FamilyKind::Exponential: out += " a=" + format_number(f.as<ExponentialParams>().a); break;
    case FamilyKind::IntegralPE: {
        const auto& p = f.as<IntegralPEParams>();
        out += " P=" + list(p.p) + " Q=" + list(p.q) + " c=" + format_number(p.c) + " x0=" + format_number(p.x0);
        break;
    }
    }
    return out;
}

FamilyMap family_from_params(std::string_view kind_name, std::span<const double> params)
{
    const FamilyKind kind = parse_kind(kind_name);
    const auto need = [&](std::size_t n) {
        if (params.size() != n)
            throw Error(ErrorCode::InvalidParameter, std::string(to_string(kind)) + " expects " + std::to_string(n)
                                                         + " parameters, got " + std::to_string(params.size()));
    };
    switch (kind) {
    case FamilyKind::TrigLift: {
        if (params.size() < 4)
            throw Error(ErrorCode::InvalidParameter, "trig_lift expects D,m,mu_1..mu_2m");
        const double d = params[0];
        const double m = params[1];
        if (d != std::floor(d) || m != std::floor(m) || m < 1 || m > 1e4)
            throw Error(ErrorCode::InvalidParameter, "trig_lift D and m must be integers");
        need(2 + 2 * static_cast<std::size_t>(m));
        return FamilyMap::trig_lift(static_cast<int>(d), static_cast<int>(m),
                                    std::vector<double>(params.begin() + 2, params.end()));
    }
    case FamilyKind::Cosine: need(2); return FamilyMap::cosine(params[0], params[1]);
    case FamilyKind::StandardDeg: need(2); return FamilyMap::standard(params[0], params[1]);
    case FamilyKind::Exponential: need(1); return FamilyMap::exponential(params[0]);
    case FamilyKind::IntegralPE: break;
    }
    throw Error(ErrorCode::InvalidParameter, "integral_pe takes a key=value block (--map), not positional params");
}

}  // namespace realdyn
