#include "qcap/layout.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace qcap {

SystemLayout::SystemLayout(std::vector<Factor> factors, std::optional<ClassicalSplit> split)
    : factors_(std::move(factors)), split_(std::move(split)) {
    validate();
    compute_strides();
}

SystemLayout SystemLayout::single(const std::string& label, int dim) {
    return SystemLayout({{label, dim}});
}

void SystemLayout::validate() const {
    std::set<std::string> seen;
    for (const auto& f : factors_) {
        if (f.dim < 1) throw std::invalid_argument("factor '" + f.label + "' has dim < 1");
        if (!seen.insert(f.label).second)
            throw std::invalid_argument("duplicate factor label '" + f.label + "'");
    }
    if (split_) {
        auto it = std::find_if(factors_.begin(), factors_.end(),
                               [&](const Factor& f) { return f.label == split_->label; });
        if (it == factors_.end())
            throw std::invalid_argument("classical split names unknown factor '" + split_->label + "'");
        if (split_->num_blocks < 1 || split_->block_dim < 1)
            throw std::invalid_argument("classical split with non-positive block count or dim");
        if (it->dim != split_->num_blocks * split_->block_dim)
            throw std::invalid_argument("classical split does not factor the dimension of '" +
                                        split_->label + "'");
    }
}

void SystemLayout::compute_strides() {
    strides_.assign(factors_.size(), 1);
    total_dim_ = 1;
    for (int k = static_cast<int>(factors_.size()) - 1; k >= 0; --k) {
        strides_[k] = total_dim_;
        total_dim_ *= factors_[k].dim;
    }
}

int SystemLayout::index_of(const std::string& label) const {
    for (int k = 0; k < num_factors(); ++k)
        if (factors_[k].label == label) return k;
    throw std::invalid_argument("unknown factor label '" + label + "'");
}

bool SystemLayout::has_label(const std::string& label) const {
    return std::any_of(factors_.begin(), factors_.end(),
                       [&](const Factor& f) { return f.label == label; });
}

SystemLayout SystemLayout::tensor_with(const SystemLayout& other) const {
    std::vector<Factor> all = factors_;
    for (const auto& f : other.factors_) {
        if (has_label(f.label))
            throw std::invalid_argument("label collision on '" + f.label + "' in tensor product");
        all.push_back(f);
    }
    // A classical split survives only if exactly one side carries one.
    std::optional<ClassicalSplit> split = split_;
    if (!split) split = other.split_;
    return SystemLayout(std::move(all), split);
}

SystemLayout SystemLayout::sublayout(const std::vector<int>& factor_indices) const {
    std::vector<Factor> kept;
    kept.reserve(factor_indices.size());
    for (int idx : factor_indices) kept.push_back(factors_.at(idx));
    std::optional<ClassicalSplit> split;
    if (split_) {
        for (const auto& f : kept)
            if (f.label == split_->label) split = split_;
    }
    return SystemLayout(std::move(kept), split);
}

SystemLayout SystemLayout::renamed(const std::string& old_label, const std::string& new_label) const {
    std::vector<Factor> fs = factors_;
    fs[index_of(old_label)].label = new_label;
    std::optional<ClassicalSplit> split = split_;
    if (split && split->label == old_label) split->label = new_label;
    return SystemLayout(std::move(fs), split);
}

std::vector<int> SystemLayout::digits(int flat) const {
    std::vector<int> d(factors_.size());
    for (size_t k = 0; k < factors_.size(); ++k) {
        d[k] = flat / strides_[k];
        flat %= strides_[k];
    }
    return d;
}

int SystemLayout::flat(const std::vector<int>& digits) const {
    int idx = 0;
    for (size_t k = 0; k < factors_.size(); ++k) idx += digits[k] * strides_[k];
    return idx;
}

bool SystemLayout::operator==(const SystemLayout& other) const {
    if (factors_.size() != other.factors_.size()) return false;
    for (size_t k = 0; k < factors_.size(); ++k)
        if (factors_[k].label != other.factors_[k].label || factors_[k].dim != other.factors_[k].dim)
            return false;
    return true;
}

}  // namespace qcap
