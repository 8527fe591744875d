#pragma once

#include <vector>

#include "qcap/channel.hpp"

namespace qcap {

/// Integer message sizes: c classical bits, q qubits, e ebits.
struct CodeBits {
    int c = 0;
    int q = 0;
    int e = 0;
    int message_dim() const { return 1 << (c + q + e); }
};

/// Pure protocol state built from an input ensemble rho on {Sc, Sr, A} (block
/// diagonal in Sc with maximally mixed marginal on S) and a channel A -> B:
/// the maximally entangled extended source is pushed through the block
/// Stinespring dilation of the map induced by rho and then through the
/// channel dilation. Output layout: (Rhc, Rhr, B, Ec, E, E0).
PureState build_psi_rho(const DensityOperator& rho, const ChannelRep& channel);

struct EncoderIdentityResult {
    double protocol_residual = 0.0;   ///< trace distance between the two routes
    double dephasing_residual = 0.0;  ///< encoder vs encoder-after-classical-dephasing
};

/// Checks that routing the extended state through the randomizing isometries
/// on the reference side equals encoding the purified source with the
/// composed encoder and sending it through the channel, and that the encoder
/// commutes with dephasing of the classical message register.
/// `s` is a permutation of {0..d_Sc-1}; `u_blocks` holds d_Sc unitaries on Sr.
EncoderIdentityResult verify_encoder_identity(const DensityOperator& rho,
                                              const ChannelRep& channel, const CodeBits& code,
                                              const std::vector<int>& s,
                                              const std::vector<MatrixXcd>& u_blocks);

/// Block-diagonal ensemble helper: rho = (1/d_sc) sum_j |j><j| (x) rho_j with
/// each rho_j a purification-like state of the maximally mixed Sr marginal.
DensityOperator block_ensemble(const std::vector<MatrixXcd>& blocks, int d_sr, int d_a);

}  // namespace qcap
