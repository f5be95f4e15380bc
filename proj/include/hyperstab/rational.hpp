#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "error.hpp"

namespace hyperstab {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
    if (den == 0)
        throw Error(ErrorKind::Parse, "zero denominator");
    return Rational(BigInt(num), BigInt(den));
}

/// Accepts "p/q", "p" or a short decimal such as "0.25".
inline Rational parse_rational(const std::string& text) {
    try {
        if (auto slash = text.find('/'); slash != std::string::npos) {
            BigInt num(text.substr(0, slash));
            BigInt den(text.substr(slash + 1));
            if (den == 0)
                throw Error(ErrorKind::Parse, "zero denominator in '" + text + "'");
            return Rational(num, den);
        }
        if (auto dot = text.find('.'); dot != std::string::npos) {
            std::string digits = text.substr(0, dot) + text.substr(dot + 1);
            BigInt den = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(text.size() - dot - 1));
            return Rational(BigInt(digits.empty() || digits == "-" ? "0" : digits), den);
        }
        return Rational(BigInt(text));
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw Error(ErrorKind::Parse, "not a rational number: '" + text + "'");
    }
}

inline std::string to_string(const Rational& q) {
    if (denominator(q) == 1)
        return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

inline double to_double(const Rational& q) {
    return q.convert_to<double>();
}

inline BigInt ceil_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    if (q * b != a && ((a > 0) == (b > 0)))
        ++q;
    return q;
}

} // namespace hyperstab
