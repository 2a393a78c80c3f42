#include "ellipt/rational.hpp"

#include "ellipt/errors.hpp"

namespace ellipt {

namespace {

bool valid_integer_token(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = 0;
    if (s[0] == '-' || s[0] == '+') i = 1;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

} // namespace

BigInt parse_bigint(const std::string& text) {
    std::string t = text;
    if (!valid_integer_token(t)) throw parse_error("bad integer literal: '" + text + "'");
    const bool neg = t[0] == '-';
    if (t[0] == '-' || t[0] == '+') t.erase(0, 1); // GMP rejects an explicit plus
    // strip leading zeros: the GMP string constructor would read them as octal
    const auto nz = t.find_first_not_of('0');
    t = nz == std::string::npos ? "0" : t.substr(nz);
    const BigInt v(t);
    return neg ? -v : v;
}

Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    const std::string num = text.substr(0, slash);
    const std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
    const BigInt p = parse_bigint(num), q = parse_bigint(den);
    if (q == 0) throw parse_error("zero denominator: '" + text + "'");
    // two-integer construction canonicalizes (reduces and fixes the sign)
    return Rational(p, q);
}

std::string format_rational(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

double to_double(const Rational& r) {
    return r.convert_to<double>();
}

std::optional<Rational> rational_sqrt(const Rational& r) {
    if (r < 0) return std::nullopt;
    BigInt p = numerator(r), q = denominator(r);
    BigInt sp = sqrt(p), sq = sqrt(q);
    if (sp * sp != p || sq * sq != q) return std::nullopt;
    return Rational(sp, sq);
}

} // namespace ellipt
