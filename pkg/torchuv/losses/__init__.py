from .functional import *
from .iuv import *
from .joints import *
from .location import *
from .loss import *
from .total import *
from .weights import *
