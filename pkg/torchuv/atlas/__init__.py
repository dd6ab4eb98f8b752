from .atlas import *
from .cut import *
from .distortion import *
from .embed import *
from .similarity import *
from .symmetry import *
