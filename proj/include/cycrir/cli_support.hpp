#pragma once

#include <cctype>
#include <cstdlib>
#include <string>
#include <vector>

#include "cycrir/errors.hpp"
#include "cycrir/poly.hpp"
#include "cycrir/textio.hpp"

namespace cycrir {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline double parse_double(const std::string& s) {
    const std::string t = trim(s);
    if (t.empty()) throw ValidationError("empty number literal");
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) throw ValidationError("malformed number literal: '" + s + "'");
    return v;
}

/// Complex literal a+bi: "0.1+0.2i", "-0.5+0i", "3", "-2i", "i", "-i".
inline cplx parse_complex(const std::string& s) {
    const std::string t = trim(s);
    if (t.empty()) throw ValidationError("empty complex literal");
    if (t.back() != 'i' && t.back() != 'I') return cplx(parse_double(t), 0.0);
    const std::string body = t.substr(0, t.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        const char c = body[k];
        if ((c == '+' || c == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    const auto parse_imag = [&](const std::string& part) {
        if (part.empty() || part == "+") return 1.0;
        if (part == "-") return -1.0;
        return parse_double(part);
    };
    if (split == std::string::npos) return cplx(0.0, parse_imag(body));
    return cplx(parse_double(body.substr(0, split)), parse_imag(body.substr(split)));
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

/// Comma-separated real coefficients, descending powers: "1,4,3" is s^2+4s+3.
inline std::vector<double> parse_coeff_list(const std::string& s) {
    std::vector<double> out;
    for (const std::string& item : split(s, ',')) out.push_back(parse_double(item));
    if (out.empty()) throw ValidationError("empty coefficient list");
    return out;
}

inline std::vector<cplx> parse_complex_list(const std::string& s) {
    std::vector<cplx> out;
    for (const std::string& item : split(s, ',')) out.push_back(parse_complex(item));
    return out;
}

/// "num;den" with comma lists on both sides, e.g. "0.5,-3;1,6".
inline std::pair<std::vector<double>, std::vector<double>> parse_rational_spec(const std::string& s) {
    const auto parts = split(s, ';');
    if (parts.size() != 2) throw ValidationError("rational spec must be 'num;den': '" + s + "'");
    return {parse_coeff_list(parts[0]), parse_coeff_list(parts[1])};
}

/// "3:21" inclusive; both ends odd.
inline std::pair<int, int> parse_n_range(const std::string& s) {
    const auto parts = split(s, ':');
    if (parts.size() != 2) throw ValidationError("n-range must be 'lo:hi': '" + s + "'");
    const double lo = parse_double(parts[0]), hi = parse_double(parts[1]);
    const int ilo = static_cast<int>(lo), ihi = static_cast<int>(hi);
    if (lo != ilo || hi != ihi) throw ValidationError("n-range bounds must be integers");
    if (ilo % 2 == 0 || ihi % 2 == 0) throw ValidationError("n-range bounds must be odd");
    return {ilo, ihi};
}

}  // namespace cycrir
