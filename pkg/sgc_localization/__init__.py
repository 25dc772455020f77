"""
Sub-wavelength 2-D atom localization in a V-type atom with spontaneously generated coherence.
"""
