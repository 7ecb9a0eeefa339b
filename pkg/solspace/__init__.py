

__version__ = "0.1.0"

from .io import *
from .formulas import *
from .solver import *
from .topology import *
from .shattering import *
from .drunkwalk import *
from .lineartest import *
from .scaling import *
