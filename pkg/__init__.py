"""perilod - head-tracked peripheral-degradation level-of-detail model."""

__version__ = "0.1.0"
