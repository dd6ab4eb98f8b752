from .iuv import *
from .location import *
from .raster import *
from .transfer import *
from .types import *
from .weights import *
