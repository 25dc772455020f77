"""This package provides settings presets for localization runs.

For example, the parameter sets of the detuning and SGC sweeps.
"""
