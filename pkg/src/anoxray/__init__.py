"""Semi-supervised anomaly detection for chest X-rays.

Train one generative adversarial model per known image class, score query
images by searching the latent space for the closest reconstruction, and fuse
the per-model anomaly scores so that images of a class never seen in training
rank highest. Includes the lung-segmentation preprocessing stage needed to
keep multi-source border/scanner artifacts from acting as shortcuts.
"""

__version__ = "0.1.0"
