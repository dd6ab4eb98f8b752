from .distance import *
from .fileio import *
from .humanoid import *
from .trimesh import *
