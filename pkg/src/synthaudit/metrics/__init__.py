from .nn import EUCLIDEAN, HAMMING, METRICS, loo_nn_distances, nn_distances, row_keys
from .report import ImsStats, PrivacyReport, TailStats, ims_share, pct, privacy_report
from .filters import outlier_cutoff, outlier_filter, similarity_filter
