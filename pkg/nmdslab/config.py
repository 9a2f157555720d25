"""config.py

Turn the evaluated keywords of a campaign file into a validated search
campaign
"""

import logging

from nmdslab.gf import parse_field, FieldError
from nmdslab.search import SearchCampaign, SearchError
from nmdslab.input.specs import parse_permutation, SpecParseError
from nmdslab.input.larkeval import LarkExpressionError, parse_element

# Correspondence between keyword names and campaign parameters
_CDICT = {
    "name": "name",
    "mode": "mode",
    "order": "n",
    "fixed_xor": "l",
    "powers": "k_set",
    "seed": "seed",
    "budget": "budget",
    "sample": "sample",
    "d1": "d1",
    "rho1": "rho1",
    "rho2": "rho2",
    "family": "family",
    "predicate": "predicate",
}


class CampaignConfigError(Exception):
    pass


def _integer(v, name):
    if isinstance(v, float) and v.is_integer():
        v = int(v)
    if not isinstance(v, int):
        raise CampaignConfigError("{0} must be an integer, got {1}".format(name, v))
    return v


class CampaignConfig(object):
    """A validated search campaign, built from the values produced by the
    .evaluate method of a CampaignInput object."""

    def __init__(self, params={}, overrides={}):
        """Initialise a CampaignConfig object

        Arguments:
            params {dict} -- Dictionary of parameters as returned by
                             CampaignInput.evaluate

        Keyword Arguments:
            overrides {dict} -- Campaign parameters given on the command line
                                (seed, budget, long), taking precedence over
                                the file
        """

        self._params = {}

        for iname, cname in _CDICT.items():
            if iname not in params:
                continue
            self._params[cname] = self.validate(cname, params[iname].value)

        if "field" in params:
            self._params["field"] = self.validate("field", params["field"].value)
        else:
            self._params["field"] = parse_field("4:0x13")

        # Entries need the field to be evaluated
        if "entries" in params:
            kw_values = params["entries"].value
            self._params["entries"] = self._validate_entries(kw_values)

        for k, v in overrides.items():
            if v is not None:
                self._params[k] = v

        if "n" not in self._params:
            raise CampaignConfigError("Campaign must define the order")
        self._params.setdefault("l", 0)
        self._params.setdefault("k_set", [self._params["n"]])

        try:
            self._campaign = SearchCampaign(**self._params)
        except SearchError as e:
            raise CampaignConfigError(str(e))

        logging.info("Campaign parameters:")
        for k, v in self._campaign.to_dict().items():
            logging.info("\t{0} => {1}".format(k, v))

    def validate(self, name, value):
        """Validate a campaign parameter with a custom method, if present.

        Arguments:
            name {str} -- Name of the campaign parameter
            value {[[any]]} -- Lines of values of the keyword

        Returns:
            value -- Validated and normalised value
        """

        vname = "_validate_{0}".format(name)

        if hasattr(self, vname):
            return getattr(self, vname)(value)

        return value

    @property
    def campaign(self):
        return self._campaign

    @property
    def name(self):
        return self._campaign.name

    def _single(self, value, name):
        if len(value) != 1 or len(value[0]) != 1:
            raise CampaignConfigError("{0} takes a single value".format(name))
        return value[0][0]

    def _validate_name(self, v):
        return " ".join(v[0])

    def _validate_mode(self, v):
        return self._single(v, "mode")

    def _validate_n(self, v):
        n = _integer(self._single(v, "order"), "order")
        if n < 2:
            raise CampaignConfigError("Invalid order {0}".format(n))
        return n

    def _validate_l(self, v):
        return _integer(self._single(v, "fixed_xor"), "fixed_xor")

    def _validate_k_set(self, v):
        ks = [_integer(k, "powers") for line in v for k in line]
        if len(ks) == 0 or min(ks) < 1:
            raise CampaignConfigError("Powers must be positive integers")
        return ks

    def _validate_seed(self, v):
        return _integer(self._single(v, "seed"), "seed")

    def _validate_budget(self, v):
        b = _integer(self._single(v, "budget"), "budget")
        if b < 0:
            raise CampaignConfigError("Invalid budget {0}".format(b))
        return b

    def _validate_sample(self, v):
        s = _integer(self._single(v, "sample"), "sample")
        if s < 1:
            raise CampaignConfigError("Invalid sample size {0}".format(s))
        return s

    def _validate_d1(self, v):
        return self._single(v, "d1")

    def _validate_family(self, v):
        return self._single(v, "family")

    def _validate_predicate(self, v):
        return self._single(v, "predicate")

    def _validate_field(self, v):
        try:
            return parse_field(" ".join(v[0]))
        except FieldError as e:
            raise CampaignConfigError(str(e))

    def _validate_rho1(self, v):
        try:
            return parse_permutation(" ".join(v[0]))
        except SpecParseError as e:
            raise CampaignConfigError(str(e))

    _validate_rho2 = _validate_rho1

    def _validate_entries(self, v):
        field = self._params["field"]
        try:
            vals = [parse_element(tk, field).value for line in v for tk in line]
        except LarkExpressionError as e:
            raise CampaignConfigError(str(e))
        if len(vals) == 0 or 0 in vals:
            raise CampaignConfigError("Entries must be nonzero field elements")
        return sorted(set(vals))
