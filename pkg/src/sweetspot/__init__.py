"""sweetspot - power/response models of DVFS servers with sleep states."""

__version__ = "0.1.0"
