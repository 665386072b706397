"""rcrl: two-stage reward-curriculum reinforcement learning.

Off-policy agents (TD3, SAC) built on explicit numpy math, a replay
buffer with split reward channels for on-the-fly reward recomposition,
a curriculum scheduler with plateau-detection switching, two desk-scale
control environments, and a training/ablation CLI.
"""

__version__ = "0.1.0"
