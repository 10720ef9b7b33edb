"""
Multi-antenna OFDM downlink with an insufficient cyclic prefix.

Time-frequency selective (TF) precoding, conventional frequency selective
(F) precoding and time-reversal (TR) filtering, with exact SINR and rate
evaluation, infinite-antenna limits, finite-size approximations and a
time-domain link simulator.
"""

__version__ = "0.1.0"

from .dsp import DegenerateChannelError, OfdmConfig, QamConstellation, dft, qam_detect, qam_map, weight_c, weight_ctilde
from .channel import (
    ChannelRealization,
    PowerDelayProfile,
    SpatialCorrelationSpec,
    etu_pdp,
    exponential_pdp,
    freq_response,
    generate_cir,
    pdp_from_spec,
)
from .precoding import EffectiveChannels, PrecoderSet, SinrRateReport, effective_channels, f_precoder, sinr_tf, tf_precoder
from .trfilter import TrChannels, TrEffectiveChannel, sinr_tr, tr_channels, tr_effective_channel
from .asymptotics import (
    AsymptoticReport,
    TwoTapPrediction,
    lemma1_prediction,
    optimize_threshold,
    rate_inf_tf,
    rate_inf_tr,
    sinr_inf_tf,
)
from .finite_size import FiniteSizeReport, gamma_tf, gamma_tr, rate_approx, rho
from .linksim import LinkResult, LinkScenario, mc_rate, run_link

