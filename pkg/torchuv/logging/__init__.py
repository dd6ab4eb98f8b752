from .backends import *
from .logger import *
from .visualize import *
