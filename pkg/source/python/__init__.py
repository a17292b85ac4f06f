from . import file_io
from . import base
from . import base_info
from . import timeml
from . import features
from . import classifier
from . import experiment
from . import stats
from . import synth
