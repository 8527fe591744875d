#pragma once

#include <string>
#include <vector>

#include "qcap/density.hpp"
#include "qcap/linalg.hpp"

namespace qcap {

enum class ChannelKind { Kraus, Choi, Stinespring };
enum class TraceFlag { TracePreserving, TraceNonIncreasing, GeneralCP };

/// Completely positive map between labeled spaces, held in Kraus, Choi or
/// Stinespring form. Conversions between the forms are explicit; the Choi
/// state follows the normalized maximally-entangled-state convention (the
/// Choi state of a trace-preserving map has trace 1).
class ChannelRep {
  public:
    static ChannelRep from_kraus(std::vector<MatrixXcd> kraus, SystemLayout in, SystemLayout out,
                                 TraceFlag flag = TraceFlag::TracePreserving);
    /// `choi` must live on in (x) out with the input factors first.
    static ChannelRep from_choi(DensityOperator choi, SystemLayout in, SystemLayout out,
                                TraceFlag flag = TraceFlag::TracePreserving);
    static ChannelRep from_stinespring(MatrixXcd isometry, SystemLayout in, SystemLayout out,
                                       int env_dim, TraceFlag flag = TraceFlag::TracePreserving);

    ChannelKind kind() const { return kind_; }
    TraceFlag trace_flag() const { return flag_; }
    const SystemLayout& in_layout() const { return in_; }
    const SystemLayout& out_layout() const { return out_; }
    int in_dim() const { return in_.dim(); }
    int out_dim() const { return out_.dim(); }
    int env_dim() const;  ///< environment dimension of the Stinespring form

    /// Kraus operators (converting if needed; Choi eigenvalues below 1e-10
    /// are truncated, which bounds the environment dimension).
    const std::vector<MatrixXcd>& kraus() const;
    /// Choi state on in (x) out under the normalized convention.
    DensityOperator to_choi() const;
    /// Stinespring isometry in -> out (x) env; returns a Stinespring-kind rep.
    ChannelRep stinespring() const;
    /// Complementary map in -> env obtained by tracing the output side of the
    /// Stinespring dilation.
    ChannelRep complementary(const std::string& env_label = "env") const;

    /// Action on the matched factors of `rho` (identity elsewhere). The
    /// channel input labels must all be present; they are replaced by the
    /// output labels in the result, preserving the position of the first
    /// matched factor. Preserves the subnormalization tag.
    DensityOperator apply(const DensityOperator& rho) const;

    /// Raw action on a matrix over exactly the input space.
    MatrixXcd apply_matrix(const MatrixXcd& m) const;

    /// n-fold tensor power; factor labels get "#k" suffixes per copy.
    ChannelRep tensor_power(int n) const;

    /// Returns a copy acting between relabeled spaces.
    ChannelRep with_layouts(SystemLayout in, SystemLayout out) const;

  private:
    ChannelRep() = default;
    void validate() const;

    ChannelKind kind_ = ChannelKind::Kraus;
    TraceFlag flag_ = TraceFlag::TracePreserving;
    SystemLayout in_, out_;
    mutable std::vector<MatrixXcd> kraus_;  // cached conversion target
    MatrixXcd choi_;       // valid when kind_ == Choi
    MatrixXcd stine_;      // valid when kind_ == Stinespring
    int env_dim_ = 0;
};

/// Applies the map described by a Choi state to `varsigma`:
/// d_in * Tr_in[(varsigma^T (x) I) J], transposition in the basis the Choi
/// state was formed in.
DensityOperator choi_apply(const DensityOperator& choi, const SystemLayout& in,
                           const SystemLayout& out, const DensityOperator& varsigma);

ChannelRep identity_channel(const std::string& in_label, const std::string& out_label, int dim);

/// Canonical qubit (and erasure) channel zoo. `param` is the usual noise
/// parameter; erasure outputs dim d_in + 1 with the last basis state as the
/// erasure flag.
ChannelRep standard_channel(const std::string& name, double param,
                            const std::string& in_label = "A",
                            const std::string& out_label = "B");

}  // namespace qcap
