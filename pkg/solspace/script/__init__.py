
""" Scripts """

from .harness import *
