"""Multi-session EEG biometric verification toolkit.

Pipeline: corpus -> preprocess -> features -> matching -> protocol ->
metrics, driven in batch by the `eegauth` CLI.
"""

__version__ = "0.1.0"
