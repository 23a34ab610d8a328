"""Static and motional vacuum radiation forces for a two-mirror cavity.

A 1+1-dimensional scalar vacuum scatters off two partially transmitting
mirrors.  This package computes the mean (static) radiation force, the
force-fluctuation spectra, the motional force susceptibilities of the
cavity, and the corresponding time-domain response.
"""

__version__ = "0.1.0"
