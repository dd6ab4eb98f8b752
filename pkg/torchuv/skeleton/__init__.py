from .joints import *
from .regressor import *
