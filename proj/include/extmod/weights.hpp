#pragma once

#include "extmod/errors.hpp"
#include "extmod/field.hpp"

#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace extmod {

/**
 * Weight data of the star algebra: t >= 3 arm lengths p_i >= 2 plus one
 * scalar parameter per arm i >= 3.  Parameters must be pairwise distinct,
 * nonzero, and the first one is normalized to 1.
 *
 * Defaults: lambda_3 = 1, lambda_i = i - 2 for i >= 4.
 */
class WeightSpec {
public:
    explicit WeightSpec(std::vector<int> weights, std::vector<Rat> lambdas = {})
        : p_(std::move(weights)), lambdas_(std::move(lambdas)) {
        if (p_.size() < 3)
            throw std::invalid_argument("need at least 3 weights");
        for (int w : p_)
            if (w < 2)
                throw std::invalid_argument("weights must be >= 2");
        if (lambdas_.empty()) {
            for (std::size_t i = 3; i <= p_.size(); ++i)
                lambdas_.emplace_back(i == 3 ? 1 : static_cast<long>(i) - 2);
        }
        if (lambdas_.size() != p_.size() - 2)
            throw std::invalid_argument("expected t-2 parameters");
        if (lambdas_[0] != 1)
            throw std::invalid_argument("first parameter must be 1");
        std::set<Rat> distinct(lambdas_.begin(), lambdas_.end());
        if (distinct.size() != lambdas_.size() || distinct.count(Rat(0)))
            throw std::invalid_argument("parameters must be distinct and nonzero");
    }

    int t() const { return static_cast<int>(p_.size()); }

    /// Weight of arm i, 1-based.
    int p(int arm) const {
        if (arm < 1 || arm > t())
            throw std::out_of_range("arm index");
        return p_[static_cast<std::size_t>(arm - 1)];
    }

    /// Parameter of arm i, defined for 3 <= i <= t.
    const Rat& lambda(int arm) const {
        if (arm < 3 || arm > t())
            throw std::out_of_range("parameter index");
        return lambdas_[static_cast<std::size_t>(arm - 3)];
    }

    const std::vector<int>& weights() const { return p_; }
    const std::vector<Rat>& lambdas() const { return lambdas_; }

    bool operator==(const WeightSpec& o) const {
        return p_ == o.p_ && lambdas_ == o.lambdas_;
    }
    bool operator!=(const WeightSpec& o) const { return !(*this == o); }

    std::string describe() const {
        std::ostringstream os;
        os << "(";
        for (std::size_t i = 0; i < p_.size(); ++i)
            os << (i ? "," : "") << p_[i];
        os << ")";
        return os.str();
    }

private:
    std::vector<int> p_;
    std::vector<Rat> lambdas_;
};

} // namespace extmod
