"""Desk-scale pipeline for restoring detail lost by distilled image generators.

Subpackages:
    core        image I/O, dataset manifests, splitting, run configuration
    datagen     paired synthetic dataset construction and the procedural oracle
    diversity   attribute statistics and 2-D embedding projection
    models      U-Net+CBAM, CycleGAN and ESA-CycleGAN architectures
    losses      pairwise and adversarial training objectives
    training    trainers, early stopping, checkpointing, grid search
    evaluation  SSIM/PSNR/FID/FID_diff metrics and the latency benchmark
"""

__version__ = "0.1.0"
