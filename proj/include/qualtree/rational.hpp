#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace qualtree {

/// Arbitrary-precision rational, always normalized (denominator > 0, lowest terms).
using Rational = boost::multiprecision::cpp_rational;

inline Rational half() { return Rational(1, 2); }

/// Parses "n/d" or "n". Throws std::invalid_argument on malformed text or zero denominator.
inline Rational parse_rational(std::string_view text)
{
    auto digits = [](std::string_view s) {
        if (s.empty())
            return false;
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size())
            return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9')
                return false;
        return true;
    };
    auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
    if (!digits(num) || !digits(den))
        throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    boost::multiprecision::cpp_int n{std::string(num)}, d{std::string(den)};
    if (d == 0)
        throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(n, d);
}

inline std::string to_string(const Rational& r)
{
    auto n = boost::multiprecision::numerator(r);
    auto d = boost::multiprecision::denominator(r);
    if (d == 1)
        return n.str();
    return n.str() + "/" + d.str();
}

/// Finite-support distribution. Weights are merged on insertion; zero weights are dropped.
/// Construction does not enforce sum-to-one so that malformed inputs can be reported by validation.
template <typename T>
class Distribution {
public:
    using Map = std::map<T, Rational>;

    Distribution() = default;

    static Distribution point(const T& x)
    {
        Distribution d;
        d.add(x, Rational(1));
        return d;
    }

    /// ½x + ½y, collapsing to a point mass when x == y.
    static Distribution even(const T& x, const T& y)
    {
        Distribution d;
        d.add(x, half());
        d.add(y, half());
        return d;
    }

    void add(const T& x, const Rational& w)
    {
        if (w == 0)
            return;
        auto [it, inserted] = weights_.try_emplace(x, w);
        if (!inserted) {
            it->second += w;
            if (it->second == 0)
                weights_.erase(it);
        }
    }

    /// Adds without merging checks on sign; used by parsers to keep negative weights visible.
    void set_raw(const T& x, const Rational& w) { weights_[x] = w; }

    const Map& weights() const { return weights_; }
    std::size_t size() const { return weights_.size(); }
    bool empty() const { return weights_.empty(); }

    Rational weight(const T& x) const
    {
        auto it = weights_.find(x);
        return it == weights_.end() ? Rational(0) : it->second;
    }

    Rational total() const
    {
        Rational s = 0;
        for (const auto& [x, w] : weights_)
            s += w;
        return s;
    }

    std::vector<T> support() const
    {
        std::vector<T> out;
        out.reserve(weights_.size());
        for (const auto& [x, w] : weights_)
            if (w > 0)
                out.push_back(x);
        return out;
    }

    bool is_point() const { return weights_.size() == 1 && weights_.begin()->second == 1; }

    /// True for a point mass or ½/½ over two distinct elements.
    bool is_even_split() const
    {
        if (is_point())
            return true;
        if (weights_.size() != 2)
            return false;
        for (const auto& [x, w] : weights_)
            if (w != half())
                return false;
        return true;
    }

    template <typename F>
    auto map(F&& f) const
    {
        using U = std::decay_t<decltype(f(std::declval<const T&>()))>;
        Distribution<U> out;
        for (const auto& [x, w] : weights_)
            out.add(f(x), w);
        return out;
    }

    friend bool operator==(const Distribution& a, const Distribution& b) { return a.weights_ == b.weights_; }
    friend bool operator<(const Distribution& a, const Distribution& b) { return a.weights_ < b.weights_; }

private:
    Map weights_;
};

} // namespace qualtree
