"""
Three BB84 variants under intercept-resend
==========================================
"""
from entkit.entanglement import SourceModel, source_throughput
from entkit.qkd import VARIANTS, ChannelModel, UniformEve, exact_statistics, run_session

for kind in VARIANTS:
    for eve in (None, UniformEve()):
        channel = ChannelModel(eve=eve)
        s = run_session(kind, 50_000, channel, seed=7).summary
        exact = exact_statistics(kind, channel)
        print(
            f"{kind:>17} eve={eve is not None!s:5} sift={s['sift_rate']:.4f} (exact {exact['sift_rate']:.4f})"
            f" qber={s['qber']:.4f} (exact {exact['qber']:.4f})"
        )

###############################################################################
# How many pairs does a one-in-ten-thousand source deliver?

y = source_throughput(SourceModel(pair_prob=1e-4), 1_000_000, seed=3)
print(f"expected {y.expected:.0f} ± {y.sigma:.1f}, simulated {y.post_selected}")
