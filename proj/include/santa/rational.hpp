#pragma once

#include "santa/error.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <cctype>
#include <string>
#include <string_view>

namespace santa {

/// Exact rational, always in lowest terms with a positive denominator.
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

/// The fat/thin threshold on normalized values.
inline Rational lambda()
{
    return Rational(6, 23);
}

/// Formats as "p/q" (integers included, e.g. "2/1", "0/1").
inline std::string to_string(const Rational& q)
{
    return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

namespace detail {

inline bool all_digits(std::string_view s)
{
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

// Base-10 only; leading zeros must not select octal.
inline Integer decimal_integer(std::string_view digits)
{
    while (digits.size() > 1 && digits.front() == '0') {
        digits.remove_prefix(1);
    }
    return Integer(std::string(digits));
}

} // namespace detail

/// Parses "p/q", an integer, or a finite decimal such as "-0.125".
inline Rational parse_rational(std::string_view text)
{
    auto fail = [&]() { return Error(ErrorCode::Parse, "not a rational: '" + std::string(text) + "'"); };

    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    if (body.empty()) {
        throw fail();
    }

    Rational result;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        auto num = body.substr(0, slash);
        auto den = body.substr(slash + 1);
        if (!detail::all_digits(num) || !detail::all_digits(den)) {
            throw fail();
        }
        Integer d = detail::decimal_integer(den);
        if (d == 0) {
            throw Error(ErrorCode::Parse, "zero denominator in '" + std::string(text) + "'");
        }
        result = Rational(detail::decimal_integer(num), d);
    } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
        auto whole = body.substr(0, dot);
        auto frac = body.substr(dot + 1);
        if ((whole.empty() && frac.empty()) || (!whole.empty() && !detail::all_digits(whole))
            || (!frac.empty() && !detail::all_digits(frac))) {
            throw fail();
        }
        Integer scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) {
            scale *= 10;
        }
        Integer digits = detail::decimal_integer(std::string(whole) + std::string(frac));
        result = Rational(digits, scale);
    } else {
        if (!detail::all_digits(body)) {
            throw fail();
        }
        result = Rational(detail::decimal_integer(body));
    }
    return negative ? Rational(-result) : result;
}

} // namespace santa
