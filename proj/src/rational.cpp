#include "coverwalk/rational.hpp"

#include <cctype>
#include <cmath>

namespace coverwalk {

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace

Rational parse_rational(const std::string& text) {
    std::string s = text;
    // trim
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    if (s.empty()) throw InputError("empty rational literal");

    bool neg = false;
    if (s[0] == '+' || s[0] == '-') {
        neg = (s[0] == '-');
        s.erase(s.begin());
    }
    if (s.empty()) throw InputError("rational literal '" + text + "' has no digits");

    Rational value;
    auto slash = s.find('/');
    auto dot = s.find('.');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash);
        std::string den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw InputError("malformed fraction '" + text + "'");
        BigInt q(den);
        if (q == 0) throw InputError("zero denominator in '" + text + "'");
        value = Rational(BigInt(num), q);
    } else if (dot != std::string::npos) {
        std::string ip = s.substr(0, dot);
        std::string fp = s.substr(dot + 1);
        if (ip.empty()) ip = "0";
        if (fp.empty()) fp = "0";
        if (!all_digits(ip) || !all_digits(fp))
            throw InputError("malformed decimal '" + text + "'");
        BigInt scale = 1;
        for (size_t i = 0; i < fp.size(); ++i) scale *= 10;
        value = Rational(BigInt(ip) * scale + BigInt(fp), scale);
    } else {
        if (!all_digits(s))
            throw InputError("malformed number '" + text + "'");
        value = Rational(BigInt(s));
    }
    return neg ? -value : value;
}

std::string format_rational(const Rational& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw InputError("non-finite value cannot become a rational");
    return Rational(x); // boost converts the binary expansion exactly
}

} // namespace coverwalk
