from .common import *
from .factory import *
from .main import *
