from .dp import DpBudget
from .models import IndependentModel, OracleModel, RandomModel, fit, fit_independent, fit_random
from .privbayes import PrivBayesModel, fit_privbayes
from .adapter import DiscretizedSampler, FileSampler
from .utility import UtilityScore, marginal_diff, mi_diff, utility
