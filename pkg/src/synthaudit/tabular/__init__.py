from .schema import CAT, NUM, Column, Dataset, SchemaError, cat_column, concat, from_arrays, from_records, num_column
from .generate import census_schema, gen_censuslite, gen_gauss, split, split_indices
from .discretize import Discretizer, apply_discretizer, fit_discretizer
from .io import CsvFormatError, read_csv, write_csv
from .outliers import DesignatedClass, GmmSmallest, RADIUS_BY_DIM, Radius, label_outliers
