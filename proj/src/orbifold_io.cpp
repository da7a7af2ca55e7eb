#include "calib/orbifold_io.hpp"

#include <charconv>
#include <sstream>

namespace calib {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

long long parse_integer(const std::string& token) {
    long long value = 0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    if (begin != end && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || begin == end) throw std::invalid_argument("not an integer: '" + token + "'");
    return value;
}

std::vector<std::string> tokens(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string t; is >> t;) out.push_back(t);
    return out;
}

}  // namespace

Rational parse_rational(const std::string& token) {
    const auto slash = token.find('/');
    if (slash == std::string::npos) return Rational(parse_integer(token));
    const long long den = parse_integer(token.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + token + "'");
    return Rational(parse_integer(token.substr(0, slash)), den);
}

std::string format_rational(const Rational& q) {
    std::string s = std::to_string(q.numerator());
    if (q.denominator() != 1) s += "/" + std::to_string(q.denominator());
    return s;
}

AffineTorusMap parse_map(const std::string& raw, int line_number) {
    try {
        std::string line = raw.substr(0, raw.find('#'));
        const auto colon = line.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("expected 'name: rows | translation'");
        const std::string name = trim(line.substr(0, colon));
        if (name.empty() || name.find_first_of(" \t;|") != std::string::npos) {
            throw std::invalid_argument("invalid map name '" + name + "'");
        }
        std::string body = line.substr(colon + 1);
        std::string shift;
        if (const auto bar = body.find('|'); bar != std::string::npos) {
            shift = body.substr(bar + 1);
            body = body.substr(0, bar);
        }

        std::vector<std::vector<long long>> rows;
        std::istringstream rs(body);
        for (std::string row; std::getline(rs, row, ';');) {
            std::vector<long long> entries;
            for (const auto& t : tokens(row)) entries.push_back(parse_integer(t));
            rows.push_back(std::move(entries));
        }
        const auto n = static_cast<Eigen::Index>(rows.size());
        if (n == 0 || rows.front().empty()) throw std::invalid_argument("empty matrix");
        IntMatrix d(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != n) {
                throw std::invalid_argument("matrix row " + std::to_string(i + 1) + " has " +
                                            std::to_string(rows[static_cast<std::size_t>(i)].size()) +
                                            " entries, expected " + std::to_string(n));
            }
            for (Eigen::Index j = 0; j < n; ++j) d(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }

        RatVector b;
        for (const auto& t : tokens(shift)) b.push_back(parse_rational(t));
        if (!b.empty() && static_cast<Eigen::Index>(b.size()) != n) {
            throw std::invalid_argument("translation has " + std::to_string(b.size()) + " entries, expected " +
                                        std::to_string(n));
        }
        return AffineTorusMap(std::move(d), std::move(b), name);
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(line_number, e.what());
    }
}

std::vector<AffineTorusMap> parse_maps(const std::string& text) {
    std::vector<AffineTorusMap> out;
    std::istringstream is(text);
    int line_number = 0;
    for (std::string line; std::getline(is, line);) {
        ++line_number;
        if (trim(line.substr(0, line.find('#'))).empty()) continue;
        out.push_back(parse_map(line, line_number));
    }
    return out;
}

std::string format_map(const AffineTorusMap& map) {
    std::ostringstream os;
    os << (map.name().empty() ? "map" : map.name()) << ':';
    for (Eigen::Index i = 0; i < map.dim(); ++i) {
        if (i) os << " ;";
        for (Eigen::Index j = 0; j < map.dim(); ++j) os << ' ' << map.linear()(i, j);
    }
    os << " |";
    for (const auto& q : map.translation()) os << ' ' << format_rational(q);
    return os.str();
}

std::string format_maps(const std::vector<AffineTorusMap>& maps) {
    std::string out;
    for (const auto& m : maps) out += format_map(m) + "\n";
    return out;
}

}  // namespace calib
