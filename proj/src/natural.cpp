#include "randbench/natural.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <ostream>

#include "randbench/errors.hpp"

namespace randbench {

namespace {

using Limb = Natural::Limb;
using Wide = std::uint64_t;

constexpr Wide kBase = Wide{1} << 32;

int compare_limbs(std::span<const Limb> a, std::span<const Limb> b) noexcept {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

void trim_vec(std::vector<Limb>& v) noexcept {
    while (!v.empty() && v.back() == 0) v.pop_back();
}

// r = a * b, schoolbook. r must not alias a or b.
std::vector<Limb> multiply(std::span<const Limb> a, std::span<const Limb> b) {
    if (a.empty() || b.empty()) return {};
    std::vector<Limb> r(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        Wide carry = 0;
        const Wide ai = a[i];
        if (ai == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            Wide t = ai * b[j] + r[i + j] + carry;
            r[i + j] = static_cast<Limb>(t);
            carry = t >> 32;
        }
        r[i + b.size()] = static_cast<Limb>(carry);
    }
    trim_vec(r);
    return r;
}

// Divides `u` in place by a single limb, returning the remainder.
Limb divide_small(std::vector<Limb>& u, Limb divisor) {
    Wide rem = 0;
    for (std::size_t i = u.size(); i-- > 0;) {
        Wide cur = (rem << 32) | u[i];
        u[i] = static_cast<Limb>(cur / divisor);
        rem = cur % divisor;
    }
    trim_vec(u);
    return static_cast<Limb>(rem);
}

// Knuth, TAOCP vol. 2, 4.3.1 Algorithm D. Requires v.size() >= 2 and u >= v.
void long_divide(std::span<const Limb> u_in, std::span<const Limb> v_in, std::vector<Limb>& quotient,
                 std::vector<Limb>& remainder) {
    const std::size_t n = v_in.size();
    const std::size_t m = u_in.size() - n;
    const int shift = std::countl_zero(v_in.back());

    std::vector<Limb> v(n);
    std::vector<Limb> u(u_in.size() + 1);
    for (std::size_t i = n; i-- > 0;) {
        Wide hi = static_cast<Wide>(v_in[i]) << shift;
        Wide lo = (shift != 0 && i > 0) ? (static_cast<Wide>(v_in[i - 1]) >> (32 - shift)) : 0;
        v[i] = static_cast<Limb>(hi | lo);
    }
    u[u_in.size()] = shift != 0 ? static_cast<Limb>(static_cast<Wide>(u_in.back()) >> (32 - shift)) : 0;
    for (std::size_t i = u_in.size(); i-- > 0;) {
        Wide hi = static_cast<Wide>(u_in[i]) << shift;
        Wide lo = (shift != 0 && i > 0) ? (static_cast<Wide>(u_in[i - 1]) >> (32 - shift)) : 0;
        u[i] = static_cast<Limb>(hi | lo);
    }

    quotient.assign(m + 1, 0);
    const Wide v_top = v[n - 1];
    const Wide v_next = v[n - 2];
    for (std::size_t j = m + 1; j-- > 0;) {
        Wide numerator = (static_cast<Wide>(u[j + n]) << 32) | u[j + n - 1];
        Wide qhat = numerator / v_top;
        Wide rhat = numerator % v_top;
        while (qhat >= kBase || qhat * v_next > ((rhat << 32) | u[j + n - 2])) {
            --qhat;
            rhat += v_top;
            if (rhat >= kBase) break;
        }

        // u[j..j+n] -= qhat * v
        std::int64_t borrow = 0;
        Wide carry = 0;
        for (std::size_t i = 0; i < n; ++i) {
            Wide p = qhat * v[i] + carry;
            carry = p >> 32;
            std::int64_t t = static_cast<std::int64_t>(u[i + j]) - borrow - static_cast<std::int64_t>(p & 0xFFFFFFFFULL);
            u[i + j] = static_cast<Limb>(t);
            borrow = t < 0 ? 1 : 0;
        }
        std::int64_t t = static_cast<std::int64_t>(u[j + n]) - borrow - static_cast<std::int64_t>(carry);
        u[j + n] = static_cast<Limb>(t);

        if (t < 0) {
            // qhat was one too large; add v back.
            --qhat;
            Wide c = 0;
            for (std::size_t i = 0; i < n; ++i) {
                Wide s = static_cast<Wide>(u[i + j]) + v[i] + c;
                u[i + j] = static_cast<Limb>(s);
                c = s >> 32;
            }
            u[j + n] = static_cast<Limb>(static_cast<Wide>(u[j + n]) + c);
        }
        quotient[j] = static_cast<Limb>(qhat);
    }
    trim_vec(quotient);

    remainder.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        Wide lo = static_cast<Wide>(u[i]) >> shift;
        Wide hi = shift != 0 ? (static_cast<Wide>(u[i + 1]) << (32 - shift)) & 0xFFFFFFFFULL : 0;
        remainder[i] = static_cast<Limb>(lo | hi);
    }
    trim_vec(remainder);
}

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

Natural::Natural(std::uint64_t value) {
    if (value != 0) {
        limbs_.push_back(static_cast<Limb>(value));
        if (value >> 32) limbs_.push_back(static_cast<Limb>(value >> 32));
    }
}

void Natural::trim() noexcept { trim_vec(limbs_); }

Natural Natural::parse(std::string_view text) {
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) return from_hex(text.substr(2));
    return from_decimal(text);
}

Natural Natural::from_decimal(std::string_view digits) {
    Natural result;
    bool any = false;
    Limb chunk = 0;
    Limb scale = 1;
    auto flush = [&] {
        // result = result * scale + chunk
        Wide carry = chunk;
        for (auto& limb : result.limbs_) {
            Wide t = static_cast<Wide>(limb) * scale + carry;
            limb = static_cast<Limb>(t);
            carry = t >> 32;
        }
        if (carry) result.limbs_.push_back(static_cast<Limb>(carry));
        chunk = 0;
        scale = 1;
    };
    for (char c : digits) {
        if (c == '_') continue;
        if (c < '0' || c > '9') throw InvalidArgument("invalid decimal digit in '" + std::string(digits) + "'");
        any = true;
        chunk = chunk * 10 + static_cast<Limb>(c - '0');
        scale *= 10;
        if (scale == 1000000000U) flush();
    }
    if (!any) throw InvalidArgument("empty number");
    if (scale != 1) flush();
    result.trim();
    return result;
}

Natural Natural::from_hex(std::string_view digits) {
    Natural result;
    std::size_t bit = 0;
    bool any = false;
    for (std::size_t i = digits.size(); i-- > 0;) {
        char c = digits[i];
        if (c == '_') continue;
        int v = hex_value(c);
        if (v < 0) throw InvalidArgument("invalid hex digit in '" + std::string(digits) + "'");
        any = true;
        if (bit % 32 == 0) result.limbs_.push_back(0);
        result.limbs_.back() |= static_cast<Limb>(v) << (bit % 32);
        bit += 4;
    }
    if (!any) throw InvalidArgument("empty number");
    result.trim();
    return result;
}

Natural Natural::from_bytes_be(std::span<const std::uint8_t> bytes) {
    Natural result;
    result.limbs_.assign((bytes.size() + 3) / 4, 0);
    std::size_t bit = 0;
    for (std::size_t i = bytes.size(); i-- > 0; bit += 8) {
        result.limbs_[bit / 32] |= static_cast<Limb>(bytes[i]) << (bit % 32);
    }
    result.trim();
    return result;
}

Natural Natural::power_of_two(std::size_t exponent) {
    Natural result;
    result.limbs_.assign(exponent / 32 + 1, 0);
    result.limbs_.back() = Limb{1} << (exponent % 32);
    return result;
}

std::string Natural::to_decimal() const {
    if (is_zero()) return "0";
    std::vector<Limb> work = limbs_;
    std::vector<Limb> chunks;
    while (!work.empty()) chunks.push_back(divide_small(work, 1000000000U));
    std::string out = std::to_string(chunks.back());
    for (std::size_t i = chunks.size() - 1; i-- > 0;) {
        std::string part = std::to_string(chunks[i]);
        out.append(9 - part.size(), '0');
        out += part;
    }
    return out;
}

std::string Natural::to_hex() const {
    if (is_zero()) return "0x0";
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        for (int nib = 7; nib >= 0; --nib) {
            int v = static_cast<int>((limbs_[i] >> (nib * 4)) & 0xF);
            if (out.empty() && v == 0) continue;
            out += kDigits[v];
        }
    }
    return "0x" + out;
}

std::vector<std::uint8_t> Natural::to_bytes_be() const {
    std::vector<std::uint8_t> out((bit_length() + 7) / 8);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[out.size() - 1 - i] = static_cast<std::uint8_t>(limbs_[i / 4] >> ((i % 4) * 8));
    }
    return out;
}

std::size_t Natural::bit_length() const noexcept {
    if (limbs_.empty()) return 0;
    return (limbs_.size() - 1) * 32 + static_cast<std::size_t>(std::bit_width(limbs_.back()));
}

bool Natural::test_bit(std::size_t index) const noexcept {
    std::size_t limb = index / 32;
    return limb < limbs_.size() && ((limbs_[limb] >> (index % 32)) & 1U);
}

std::size_t Natural::trailing_zeros() const noexcept {
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        if (limbs_[i] != 0) return i * 32 + static_cast<std::size_t>(std::countr_zero(limbs_[i]));
    }
    return 0;
}

std::optional<std::uint64_t> Natural::to_u64() const noexcept {
    if (!fits_u64()) return std::nullopt;
    return low_u64();
}

std::uint64_t Natural::low_u64() const noexcept {
    std::uint64_t v = 0;
    if (!limbs_.empty()) v = limbs_[0];
    if (limbs_.size() > 1) v |= static_cast<std::uint64_t>(limbs_[1]) << 32;
    return v;
}

Natural& Natural::operator+=(const Natural& rhs) {
    if (rhs.limbs_.size() > limbs_.size()) limbs_.resize(rhs.limbs_.size(), 0);
    Wide carry = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        Wide t = static_cast<Wide>(limbs_[i]) + (i < rhs.limbs_.size() ? rhs.limbs_[i] : 0) + carry;
        limbs_[i] = static_cast<Limb>(t);
        carry = t >> 32;
        if (carry == 0 && i >= rhs.limbs_.size()) break;
    }
    if (carry) limbs_.push_back(static_cast<Limb>(carry));
    return *this;
}

Natural& Natural::operator-=(const Natural& rhs) {
    if (compare_limbs(limbs_, rhs.limbs_) < 0) throw InvalidArgument("natural subtraction would be negative");
    Wide borrow = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        Wide sub = (i < rhs.limbs_.size() ? rhs.limbs_[i] : 0) + borrow;
        Wide cur = limbs_[i];
        borrow = cur < sub ? 1 : 0;
        limbs_[i] = static_cast<Limb>(cur + (borrow ? kBase : 0) - sub);
        if (borrow == 0 && i >= rhs.limbs_.size()) break;
    }
    trim();
    return *this;
}

Natural operator*(const Natural& lhs, const Natural& rhs) {
    Natural r;
    r.limbs_ = multiply(lhs.limbs_, rhs.limbs_);
    return r;
}

Natural& Natural::operator*=(const Natural& rhs) { return *this = *this * rhs; }

std::pair<Natural, Natural> Natural::divmod(const Natural& dividend, const Natural& divisor) {
    if (divisor.is_zero()) throw InvalidArgument("division by zero");
    Natural q;
    Natural r;
    if (compare_limbs(dividend.limbs_, divisor.limbs_) < 0) {
        r = dividend;
        return {q, r};
    }
    if (divisor.limbs_.size() == 1) {
        q.limbs_ = dividend.limbs_;
        Limb rem = divide_small(q.limbs_, divisor.limbs_[0]);
        r = Natural(rem);
        return {q, r};
    }
    long_divide(dividend.limbs_, divisor.limbs_, q.limbs_, r.limbs_);
    return {q, r};
}

Natural operator/(const Natural& lhs, const Natural& rhs) { return Natural::divmod(lhs, rhs).first; }
Natural operator%(const Natural& lhs, const Natural& rhs) { return Natural::divmod(lhs, rhs).second; }
Natural& Natural::operator/=(const Natural& rhs) { return *this = *this / rhs; }
Natural& Natural::operator%=(const Natural& rhs) { return *this = *this % rhs; }

std::uint32_t Natural::mod_small(std::uint32_t divisor) const {
    if (divisor == 0) throw InvalidArgument("division by zero");
    Wide rem = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) rem = ((rem << 32) | limbs_[i]) % divisor;
    return static_cast<std::uint32_t>(rem);
}

Natural& Natural::operator<<=(std::size_t bits) {
    if (is_zero() || bits == 0) return *this;
    const std::size_t limb_shift = bits / 32;
    const unsigned bit_shift = static_cast<unsigned>(bits % 32);
    std::vector<Limb> out(limbs_.size() + limb_shift + 1, 0);
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        Wide v = static_cast<Wide>(limbs_[i]) << bit_shift;
        out[i + limb_shift] |= static_cast<Limb>(v);
        out[i + limb_shift + 1] |= static_cast<Limb>(v >> 32);
    }
    limbs_ = std::move(out);
    trim();
    return *this;
}

Natural& Natural::operator>>=(std::size_t bits) {
    const std::size_t limb_shift = bits / 32;
    if (limb_shift >= limbs_.size()) {
        limbs_.clear();
        return *this;
    }
    const unsigned bit_shift = static_cast<unsigned>(bits % 32);
    std::vector<Limb> out(limbs_.size() - limb_shift, 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        Wide lo = limbs_[i + limb_shift] >> bit_shift;
        Wide hi = (bit_shift != 0 && i + limb_shift + 1 < limbs_.size())
                      ? (static_cast<Wide>(limbs_[i + limb_shift + 1]) << (32 - bit_shift))
                      : 0;
        out[i] = static_cast<Limb>(lo | hi);
    }
    limbs_ = std::move(out);
    trim();
    return *this;
}

std::strong_ordering operator<=>(const Natural& lhs, const Natural& rhs) noexcept {
    return compare_limbs(lhs.limbs_, rhs.limbs_) <=> 0;
}

std::ostream& operator<<(std::ostream& os, const Natural& value) { return os << value.to_decimal(); }

Natural abs_diff(const Natural& a, const Natural& b) { return a < b ? b - a : a - b; }

Natural pow(Natural base, std::uint64_t exponent) {
    Natural result(1);
    while (exponent != 0) {
        if (exponent & 1U) result *= base;
        exponent >>= 1;
        if (exponent != 0) base = base * base;
    }
    return result;
}

Natural mod_mul(const Natural& a, const Natural& b, const Natural& modulus) { return (a * b) % modulus; }

Natural mod_sub(const Natural& a, const Natural& b, const Natural& modulus) {
    return a >= b ? a - b : (a + modulus) - b;
}

Natural mod_pow(const Natural& base, const Natural& exponent, const Natural& modulus) {
    if (modulus < Natural(2)) throw InvalidArgument("mod_pow: modulus must be at least 2");
    const Natural b = base % modulus;
    Natural result(1);
    for (std::size_t i = exponent.bit_length(); i-- > 0;) {
        result = mod_mul(result, result, modulus);
        if (exponent.test_bit(i)) result = mod_mul(result, b, modulus);
    }
    return result;
}

Natural gcd(Natural a, Natural b) {
    while (!b.is_zero()) {
        Natural r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

InverseResult mod_inverse(const Natural& a, const Natural& modulus) {
    if (modulus < Natural(2)) throw InvalidArgument("mod_inverse: modulus must be at least 2");
    if (a >= modulus) throw InvalidArgument("mod_inverse: operand must be reduced below the modulus");
    if (a.is_zero()) return NotInvertible{modulus};

    // Extended Euclid with the Bezout coefficient of `a` tracked modulo `modulus`,
    // which keeps every intermediate non-negative.
    Natural r0 = modulus;
    Natural r1 = a;
    Natural s0(0);
    Natural s1(1);
    while (!r1.is_zero()) {
        auto [q, r] = Natural::divmod(r0, r1);
        Natural s2 = mod_sub(s0, mod_mul(q, s1, modulus), modulus);
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (!r0.is_one()) return NotInvertible{r0};
    return s0;
}

TwoPowerSplit decompose_two_power(const Natural& n) {
    if (n.is_even() || n < Natural(3)) throw InvalidArgument("decompose_two_power: n must be odd and at least 3");
    Natural m = n - Natural(1);
    std::size_t k = m.trailing_zeros();
    return {k, m >> k};
}

namespace {

// Compares r^k with n, stopping early once the partial power exceeds n.
int compare_power(const Natural& r, std::uint64_t k, const Natural& n) {
    if (r.bit_length() > 0 && (r.bit_length() - 1) * k >= n.bit_length()) return 1;
    Natural acc(1);
    for (std::uint64_t i = 0; i < k; ++i) {
        acc *= r;
        if (acc > n) return 1;
    }
    return acc == n ? 0 : -1;
}

}  // namespace

Natural integer_root(const Natural& n, std::uint64_t k) {
    if (k == 0) throw InvalidArgument("integer_root: k must be positive");
    if (k == 1 || n.is_zero()) return n;
    if (k >= n.bit_length()) return Natural(1);
    // Newton's iteration from above: x <- ((k-1) x + n / x^(k-1)) / k decreases
    // monotonically to floor(n^(1/k)).
    const Natural kk(k);
    const Natural k_minus_one(k - 1);
    Natural x = Natural::power_of_two((n.bit_length() + k - 1) / k);
    for (;;) {
        Natural next = (k_minus_one * x + n / pow(x, k - 1)) / kk;
        if (next >= x) return x;
        x = std::move(next);
    }
}

bool is_perfect_power(const Natural& n) {
    if (n < Natural(4)) return false;
    const std::size_t bits = n.bit_length();
    for (std::uint64_t k = 2; k <= bits; ++k) {
        // Only prime exponents need checking.
        bool prime = true;
        for (std::uint64_t f = 2; f * f <= k; ++f) {
            if (k % f == 0) {
                prime = false;
                break;
            }
        }
        if (!prime) continue;
        Natural r = integer_root(n, k);
        if (r >= Natural(2) && compare_power(r, k, n) == 0) return true;
    }
    return false;
}

}  // namespace randbench
