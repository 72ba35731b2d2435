#include "mrf/rational.hpp"

#include <cctype>

namespace mrf {

std::string rat_str(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

namespace {

bool valid_int(const std::string& s, bool allow_sign) {
    if (s.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

}  // namespace

std::optional<Rat> rat_parse(const std::string& text, bool strict) {
    auto slash = text.find('/');
    std::string num = text.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
    if (!valid_int(num, true) || !valid_int(den, false)) return std::nullopt;
    Rat r;
    if (mpq_set_str(r.get_mpq_t(), (num + "/" + den).c_str(), 10) != 0) return std::nullopt;
    if (mpz_sgn(mpq_denref(r.get_mpq_t())) == 0) return std::nullopt;
    Rat canon = r;
    canon.canonicalize();
    if (strict && !(canon == r && canon.get_num().get_str() == num &&
                    (slash == std::string::npos ? canon.get_den() == 1
                                                : canon.get_den().get_str() == den)))
        return std::nullopt;
    return canon;
}

}  // namespace mrf
