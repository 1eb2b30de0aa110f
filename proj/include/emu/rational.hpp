#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "emu/check.hpp"

namespace emu {

// Arbitrary-precision signed integer, sign + magnitude in base 2^32.
// Magnitudes up to 4 limbs live inline; LP pivoting grows numbers well
// past 64 bits, while graph distances stay tiny, so the inline path is
// the common case.
class BigInt {
public:
    BigInt() = default;

    BigInt(std::int64_t v) { // NOLINT: implicit by design
        if (v == 0) return;
        sign_ = v < 0 ? -1 : 1;
        std::uint64_t m = v < 0 ? ~static_cast<std::uint64_t>(v) + 1 : static_cast<std::uint64_t>(v);
        push_limb(static_cast<std::uint32_t>(m));
        if (m >> 32) push_limb(static_cast<std::uint32_t>(m >> 32));
    }

    BigInt(const BigInt& o) { copy_from(o); }
    BigInt(BigInt&& o) noexcept { move_from(std::move(o)); }
    BigInt& operator=(const BigInt& o) {
        if (this != &o) { clear(); copy_from(o); }
        return *this;
    }
    BigInt& operator=(BigInt&& o) noexcept {
        if (this != &o) { clear(); move_from(std::move(o)); }
        return *this;
    }
    ~BigInt() { clear(); }

    bool is_zero() const { return sign_ == 0; }
    int sign() const { return sign_; }

    bool fits_i64() const {
        if (size_ > 2) return false;
        std::uint64_t m = mag64();
        if (sign_ >= 0) return m <= static_cast<std::uint64_t>(INT64_MAX);
        return m <= static_cast<std::uint64_t>(INT64_MAX) + 1;
    }
    std::int64_t as_i64() const {
        std::uint64_t m = mag64();
        return sign_ < 0 ? -static_cast<std::int64_t>(m) : static_cast<std::int64_t>(m);
    }

    static int cmp(const BigInt& a, const BigInt& b) {
        if (a.sign_ != b.sign_) return a.sign_ < b.sign_ ? -1 : 1;
        int c = cmp_mag(a, b);
        return a.sign_ >= 0 ? c : -c;
    }

    friend bool operator==(const BigInt& a, const BigInt& b) { return cmp(a, b) == 0; }
    friend bool operator!=(const BigInt& a, const BigInt& b) { return cmp(a, b) != 0; }
    friend bool operator<(const BigInt& a, const BigInt& b) { return cmp(a, b) < 0; }
    friend bool operator<=(const BigInt& a, const BigInt& b) { return cmp(a, b) <= 0; }
    friend bool operator>(const BigInt& a, const BigInt& b) { return cmp(a, b) > 0; }
    friend bool operator>=(const BigInt& a, const BigInt& b) { return cmp(a, b) >= 0; }

    BigInt operator-() const {
        BigInt r(*this);
        r.sign_ = -r.sign_;
        return r;
    }

    friend BigInt operator+(const BigInt& a, const BigInt& b) {
        if (a.sign_ == 0) return b;
        if (b.sign_ == 0) return a;
        BigInt r;
        if (a.sign_ == b.sign_) {
            add_mag(a, b, r);
            r.sign_ = a.sign_;
        } else {
            int c = cmp_mag(a, b);
            if (c == 0) return BigInt();
            if (c > 0) {
                sub_mag(a, b, r);
                r.sign_ = a.sign_;
            } else {
                sub_mag(b, a, r);
                r.sign_ = b.sign_;
            }
        }
        return r;
    }

    friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        if (a.sign_ == 0 || b.sign_ == 0) return BigInt();
        BigInt r;
        r.resize(a.size_ + b.size_);
        for (std::uint32_t i = 0; i < a.size_; ++i) {
            std::uint64_t carry = 0;
            std::uint64_t ai = a.limb(i);
            for (std::uint32_t j = 0; j < b.size_; ++j) {
                std::uint64_t cur = r.limb(i + j) + ai * b.limb(j) + carry;
                r.set_limb(i + j, static_cast<std::uint32_t>(cur));
                carry = cur >> 32;
            }
            std::uint32_t k = i + b.size_;
            while (carry) {
                std::uint64_t cur = r.limb(k) + carry;
                r.set_limb(k, static_cast<std::uint32_t>(cur));
                carry = cur >> 32;
                ++k;
            }
        }
        r.trim();
        r.sign_ = a.sign_ * b.sign_;
        return r;
    }

    // Truncated division; remainder has the sign of the dividend.
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
        EMU_INTERNAL_CHECK(b.sign_ != 0, "BigInt division by zero");
        if (cmp_mag(a, b) < 0) {
            q = BigInt();
            r = a;
            return;
        }
        divmod_mag(a, b, q, r);
        q.sign_ = q.size_ ? a.sign_ * b.sign_ : 0;
        r.sign_ = r.size_ ? a.sign_ : 0;
    }

    friend BigInt operator/(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod(a, b, q, r);
        return q;
    }
    friend BigInt operator%(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod(a, b, q, r);
        return r;
    }

    static BigInt gcd(BigInt a, BigInt b) {
        a.sign_ = a.size_ ? 1 : 0;
        b.sign_ = b.size_ ? 1 : 0;
        while (!b.is_zero()) {
            BigInt q, r;
            divmod(a, b, q, r);
            a = std::move(b);
            b = std::move(r);
        }
        return a;
    }

    static BigInt pow(BigInt base, unsigned e) {
        BigInt r(1);
        while (e) {
            if (e & 1) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    std::string to_string() const {
        if (sign_ == 0) return "0";
        BigInt t(*this);
        t.sign_ = 1;
        std::string digits;
        BigInt ten(10), q, r;
        while (!t.is_zero()) {
            divmod(t, ten, q, r);
            digits.push_back(static_cast<char>('0' + (r.size_ ? r.limb(0) : 0)));
            t = std::move(q);
        }
        if (sign_ < 0) digits.push_back('-');
        std::reverse(digits.begin(), digits.end());
        return digits;
    }

    static BigInt from_decimal(const std::string& s) {
        EMU_INPUT_CHECK(!s.empty(), "empty integer literal");
        std::size_t i = 0;
        int sg = 1;
        if (s[0] == '-' || s[0] == '+') {
            sg = s[0] == '-' ? -1 : 1;
            i = 1;
        }
        EMU_INPUT_CHECK(i < s.size(), "bare sign is not an integer");
        BigInt r, ten(10);
        for (; i < s.size(); ++i) {
            EMU_INPUT_CHECK(s[i] >= '0' && s[i] <= '9', "bad digit in integer literal: " + s);
            r = r * ten + BigInt(s[i] - '0');
        }
        if (sg < 0) r.sign_ = -r.sign_;
        return r;
    }

    std::size_t hash() const {
        std::uint64_t h = 1469598103934665603ULL ^ static_cast<std::uint64_t>(sign_ + 2);
        for (std::uint32_t i = 0; i < size_; ++i) {
            h ^= limb(i);
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }

private:
    static constexpr std::uint32_t kInline = 4;

    int sign_ = 0;
    std::uint32_t size_ = 0;
    std::uint32_t cap_ = kInline;
    union {
        std::uint32_t small_[kInline];
        std::uint32_t* heap_;
    } u_ = {};

    const std::uint32_t* data() const { return cap_ == kInline ? u_.small_ : u_.heap_; }
    std::uint32_t* data() { return cap_ == kInline ? u_.small_ : u_.heap_; }
    std::uint32_t limb(std::uint32_t i) const { return i < size_ ? data()[i] : 0; }
    void set_limb(std::uint32_t i, std::uint32_t v) { data()[i] = v; }

    std::uint64_t mag64() const {
        std::uint64_t m = size_ > 0 ? data()[0] : 0;
        if (size_ > 1) m |= static_cast<std::uint64_t>(data()[1]) << 32;
        return m;
    }

    void clear() {
        if (cap_ != kInline) std::free(u_.heap_);
        sign_ = 0;
        size_ = 0;
        cap_ = kInline;
    }

    void copy_from(const BigInt& o) {
        sign_ = o.sign_;
        size_ = o.size_;
        if (o.cap_ == kInline) {
            cap_ = kInline;
            std::memcpy(u_.small_, o.u_.small_, sizeof(u_.small_));
        } else {
            cap_ = o.cap_;
            u_.heap_ = static_cast<std::uint32_t*>(std::malloc(sizeof(std::uint32_t) * cap_));
            std::memcpy(u_.heap_, o.u_.heap_, sizeof(std::uint32_t) * size_);
        }
    }

    void move_from(BigInt&& o) noexcept {
        sign_ = o.sign_;
        size_ = o.size_;
        cap_ = o.cap_;
        if (o.cap_ == kInline)
            std::memcpy(u_.small_, o.u_.small_, sizeof(u_.small_));
        else
            u_.heap_ = o.u_.heap_;
        o.sign_ = 0;
        o.size_ = 0;
        o.cap_ = kInline;
    }

    void resize(std::uint32_t n) {
        if (n > cap_) {
            std::uint32_t newcap = std::max(n, cap_ * 2);
            auto* p = static_cast<std::uint32_t*>(std::malloc(sizeof(std::uint32_t) * newcap));
            std::memcpy(p, data(), sizeof(std::uint32_t) * size_);
            if (cap_ != kInline) std::free(u_.heap_);
            u_.heap_ = p;
            cap_ = newcap;
        }
        for (std::uint32_t i = size_; i < n; ++i) data()[i] = 0;
        size_ = n;
    }

    void push_limb(std::uint32_t v) {
        resize(size_ + 1);
        data()[size_ - 1] = v;
    }

    void trim() {
        while (size_ > 0 && data()[size_ - 1] == 0) --size_;
        if (size_ == 0) sign_ = 0;
    }

    static int cmp_mag(const BigInt& a, const BigInt& b) {
        if (a.size_ != b.size_) return a.size_ < b.size_ ? -1 : 1;
        for (std::uint32_t i = a.size_; i-- > 0;) {
            if (a.limb(i) != b.limb(i)) return a.limb(i) < b.limb(i) ? -1 : 1;
        }
        return 0;
    }

    static void add_mag(const BigInt& a, const BigInt& b, BigInt& r) {
        std::uint32_t n = std::max(a.size_, b.size_);
        r.resize(n + 1);
        std::uint64_t carry = 0;
        for (std::uint32_t i = 0; i < n; ++i) {
            std::uint64_t cur = static_cast<std::uint64_t>(a.limb(i)) + b.limb(i) + carry;
            r.set_limb(i, static_cast<std::uint32_t>(cur));
            carry = cur >> 32;
        }
        r.set_limb(n, static_cast<std::uint32_t>(carry));
        r.trim();
    }

    // Requires |a| >= |b|.
    static void sub_mag(const BigInt& a, const BigInt& b, BigInt& r) {
        r.resize(a.size_);
        std::int64_t borrow = 0;
        for (std::uint32_t i = 0; i < a.size_; ++i) {
            std::int64_t cur = static_cast<std::int64_t>(a.limb(i)) - b.limb(i) - borrow;
            if (cur < 0) {
                cur += (1LL << 32);
                borrow = 1;
            } else {
                borrow = 0;
            }
            r.set_limb(i, static_cast<std::uint32_t>(cur));
        }
        r.trim();
    }

    // Knuth algorithm D on magnitudes; requires |a| >= |b| > 0.
    static void divmod_mag(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
        if (b.size_ == 1) {
            std::uint64_t d = b.limb(0);
            q = BigInt();
            q.resize(a.size_);
            std::uint64_t rem = 0;
            for (std::uint32_t i = a.size_; i-- > 0;) {
                std::uint64_t cur = (rem << 32) | a.limb(i);
                q.set_limb(i, static_cast<std::uint32_t>(cur / d));
                rem = cur % d;
            }
            q.trim();
            q.sign_ = q.size_ ? 1 : 0;
            r = BigInt(static_cast<std::int64_t>(rem));
            return;
        }

        int shift = 0;
        std::uint32_t top = b.limb(b.size_ - 1);
        while (!(top & 0x80000000u)) {
            top <<= 1;
            ++shift;
        }
        std::uint32_t n = b.size_, m = a.size_ - b.size_;

        std::vector<std::uint32_t> u(a.size_ + 1, 0), v(n, 0);
        for (std::uint32_t i = 0; i < a.size_; ++i) u[i] = a.limb(i);
        for (std::uint32_t i = 0; i < n; ++i) v[i] = b.limb(i);
        if (shift) {
            u[a.size_] = u[a.size_ - 1] >> (32 - shift);
            for (std::uint32_t i = a.size_; i-- > 1;)
                u[i] = (u[i] << shift) | (u[i - 1] >> (32 - shift));
            u[0] <<= shift;
            for (std::uint32_t i = n; i-- > 1;)
                v[i] = (v[i] << shift) | (v[i - 1] >> (32 - shift));
            v[0] <<= shift;
        }

        q = BigInt();
        q.resize(m + 1);
        for (std::uint32_t j = m + 1; j-- > 0;) {
            std::uint64_t num = (static_cast<std::uint64_t>(u[j + n]) << 32) | u[j + n - 1];
            std::uint64_t qhat = num / v[n - 1];
            std::uint64_t rhat = num % v[n - 1];
            while (qhat >= (1ULL << 32) ||
                   qhat * v[n - 2] > ((rhat << 32) | u[j + n - 2])) {
                --qhat;
                rhat += v[n - 1];
                if (rhat >= (1ULL << 32)) break;
            }
            std::int64_t borrow = 0;
            std::uint64_t carry = 0;
            for (std::uint32_t i = 0; i < n; ++i) {
                std::uint64_t p = qhat * v[i] + carry;
                carry = p >> 32;
                std::int64_t t = static_cast<std::int64_t>(u[i + j]) -
                                 static_cast<std::int64_t>(p & 0xffffffffu) - borrow;
                if (t < 0) {
                    t += (1LL << 32);
                    borrow = 1;
                } else {
                    borrow = 0;
                }
                u[i + j] = static_cast<std::uint32_t>(t);
            }
            std::int64_t t = static_cast<std::int64_t>(u[j + n]) -
                             static_cast<std::int64_t>(carry) - borrow;
            if (t < 0) {
                t += (1LL << 32);
                // qhat was one too large: add back.
                --qhat;
                std::uint64_t c2 = 0;
                for (std::uint32_t i = 0; i < n; ++i) {
                    std::uint64_t s = static_cast<std::uint64_t>(u[i + j]) + v[i] + c2;
                    u[i + j] = static_cast<std::uint32_t>(s);
                    c2 = s >> 32;
                }
                t += static_cast<std::int64_t>(c2);
            }
            u[j + n] = static_cast<std::uint32_t>(t);
            q.set_limb(j, static_cast<std::uint32_t>(qhat));
        }
        q.trim();
        q.sign_ = q.size_ ? 1 : 0;

        r = BigInt();
        r.resize(n);
        if (shift) {
            for (std::uint32_t i = 0; i < n - 1; ++i)
                r.set_limb(i, (u[i] >> shift) | (u[i + 1] << (32 - shift)));
            r.set_limb(n - 1, u[n - 1] >> shift);
        } else {
            for (std::uint32_t i = 0; i < n; ++i) r.set_limb(i, u[i]);
        }
        r.trim();
        r.sign_ = r.size_ ? 1 : 0;
    }
};

// Exact rational, always reduced, denominator > 0.
class Rat {
public:
    Rat() : num_(0), den_(1) {}
    Rat(std::int64_t v) : num_(v), den_(1) {} // NOLINT: implicit by design
    Rat(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }
    Rat(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_integer() const { return den_ == BigInt(1); }
    int sign() const { return num_.sign(); }

    static int cmp(const Rat& a, const Rat& b) {
        if (a.num_.sign() != b.num_.sign())
            return a.num_.sign() < b.num_.sign() ? -1 : 1;
        return BigInt::cmp(a.num_ * b.den_, b.num_ * a.den_);
    }

    friend bool operator==(const Rat& a, const Rat& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) { return cmp(a, b) < 0; }
    friend bool operator<=(const Rat& a, const Rat& b) { return cmp(a, b) <= 0; }
    friend bool operator>(const Rat& a, const Rat& b) { return cmp(a, b) > 0; }
    friend bool operator>=(const Rat& a, const Rat& b) { return cmp(a, b) >= 0; }

    friend Rat operator+(const Rat& a, const Rat& b) {
        return Rat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        return Rat(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return Rat(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        EMU_INTERNAL_CHECK(!b.is_zero(), "rational division by zero");
        return Rat(a.num_ * b.den_, a.den_ * b.num_);
    }
    Rat operator-() const {
        Rat r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }

    // "p", or "p/q" when the denominator is nontrivial.
    std::string to_string() const {
        if (is_integer()) return num_.to_string();
        return num_.to_string() + "/" + den_.to_string();
    }

    // Accepts "p", "p/q" and plain decimals like "2.5".
    static Rat parse(const std::string& s) {
        auto slash = s.find('/');
        if (slash != std::string::npos) {
            BigInt n = BigInt::from_decimal(s.substr(0, slash));
            BigInt d = BigInt::from_decimal(s.substr(slash + 1));
            EMU_INPUT_CHECK(!d.is_zero(), "zero denominator in rational: " + s);
            return Rat(std::move(n), std::move(d));
        }
        auto dot = s.find('.');
        if (dot != std::string::npos) {
            std::string intpart = s.substr(0, dot);
            std::string frac = s.substr(dot + 1);
            EMU_INPUT_CHECK(!frac.empty(), "trailing dot in rational: " + s);
            bool neg = !intpart.empty() && intpart[0] == '-';
            BigInt scale = BigInt::pow(BigInt(10), static_cast<unsigned>(frac.size()));
            BigInt n = BigInt::from_decimal(intpart.empty() || intpart == "-" || intpart == "+"
                                                ? intpart + "0"
                                                : intpart);
            BigInt f = BigInt::from_decimal(frac);
            BigInt total = n * scale + (neg ? -f : f);
            return Rat(std::move(total), std::move(scale));
        }
        return Rat(BigInt::from_decimal(s), BigInt(1));
    }

    double to_double() const {
        // Only for logs and CSV summaries, never for comparisons.
        double n = std::strtod(num_.to_string().c_str(), nullptr);
        double d = std::strtod(den_.to_string().c_str(), nullptr);
        return n / d;
    }

    std::size_t hash() const { return num_.hash() * 31 + den_.hash(); }

private:
    BigInt num_, den_;

    void normalize() {
        EMU_INTERNAL_CHECK(!den_.is_zero(), "rational with zero denominator");
        if (den_.sign() < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        if (num_.is_zero()) {
            den_ = BigInt(1);
            return;
        }
        BigInt g = BigInt::gcd(num_, den_);
        if (g != BigInt(1)) {
            num_ = num_ / g;
            den_ = den_ / g;
        }
    }
};

} // namespace emu
