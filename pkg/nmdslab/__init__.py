"""
nmdslab

Construction, verification and search of near-MDS diffusion matrices over
binary extension fields and rings of binary matrices

This software is distributed under the terms of the MIT License

"""

from nmdslab.gf import FieldSpec, parse_field
from nmdslab.branch import is_nmds, is_k_nmds
from nmdslab.cost import matrix_cost
from nmdslab.input import CampaignInput
from nmdslab.config import CampaignConfig
from nmdslab.search import run_campaign
from nmdslab.catalog import load_catalog, catalog_verify
from nmdslab.version import __version__
