#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qcap {

/// One tensor factor of a multipartite space.
struct Factor {
    std::string label;
    int dim = 1;
};

/// Marks a factor as carrying a classical (direct-sum) structure: the factor
/// decomposes into `num_blocks` orthogonal sectors of dimension `block_dim`
/// each, so its dimension equals num_blocks * block_dim.
struct ClassicalSplit {
    std::string label;
    int num_blocks = 1;  ///< number of classical sectors (J)
    int block_dim = 1;   ///< dimension of each sector (r)
};

/// Ordered list of labeled tensor factors. The order is significant: the flat
/// index of a product basis state is computed with the first factor as the
/// most significant digit (Kronecker-product convention). Reordering factors
/// is always an explicit permutation, never implicit.
class SystemLayout {
  public:
    SystemLayout() = default;
    explicit SystemLayout(std::vector<Factor> factors,
                          std::optional<ClassicalSplit> split = std::nullopt);

    /// Convenience: single factor.
    static SystemLayout single(const std::string& label, int dim);

    const std::vector<Factor>& factors() const { return factors_; }
    const std::optional<ClassicalSplit>& classical_split() const { return split_; }

    int num_factors() const { return static_cast<int>(factors_.size()); }
    int dim() const { return total_dim_; }
    int factor_dim(int idx) const { return factors_[idx].dim; }

    /// Index of the factor with the given label; throws std::invalid_argument
    /// if the label is unknown.
    int index_of(const std::string& label) const;
    bool has_label(const std::string& label) const;

    /// Concatenation of factor lists; throws on label collision.
    SystemLayout tensor_with(const SystemLayout& other) const;

    /// Layout containing only the factors whose indices are listed, in the
    /// given order.
    SystemLayout sublayout(const std::vector<int>& factor_indices) const;

    /// Renames a factor in place (returns a copy with the new label).
    SystemLayout renamed(const std::string& old_label, const std::string& new_label) const;

    /// Strides of each factor in the flat index (first factor most significant).
    const std::vector<int>& strides() const { return strides_; }

    /// Decomposes a flat index into per-factor digits.
    std::vector<int> digits(int flat) const;
    /// Rebuilds a flat index from per-factor digits.
    int flat(const std::vector<int>& digits) const;

    bool operator==(const SystemLayout& other) const;

  private:
    void validate() const;
    void compute_strides();

    std::vector<Factor> factors_;
    std::optional<ClassicalSplit> split_;
    std::vector<int> strides_;
    int total_dim_ = 1;
};

}  // namespace qcap
