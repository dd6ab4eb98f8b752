from .manifest import *
from .preview import *
from .tensors import *
from .uvt import *
