from .functional import *
from .metric import *
from .pose import *
from .segmentation import *
from .similarity import *
