import os

DEFAULT_CONFIG = {
    # Logging
    'LOG_LEVEL': 'WARNING',
    # Random sampling for the oracle crosscheck
    'RADIX_SEED': 0,
    'RADIX_SAMPLES': 100,
    'RADIX_MAX_DENOMINATOR': 1,
    # Verification
    'RADIX_WORKERS': 1,
    # Pipeline
    'RADIX_K_CANDIDATES': '',
    # Reports
    'RADIX_OUTPUT_FORMAT': 'text',
}

OUTPUT_FORMATS = ('text', 'yaml')


class ConfigManager(dict):
    """ Naive configuration manager that uses environment only
    """

    def __init__(self):
        self.config = dict()

    def __coerce_value(self, value):
        if isinstance(value, str) and value.lower() in ('true', 'yes'):
            return True
        elif isinstance(value, str) and value.lower() in ('false', 'no'):
            return False
        elif isinstance(value, str) and value.strip().lstrip('-').isdigit():
            return int(value)
        return value

    def init_env(self, environ=None):
        environ = os.environ if environ is None else environ
        self.config.update({
            key: self.__coerce_value(environ.get(key, value))
            for key, value in DEFAULT_CONFIG.items()
        })
        self.validate()
        return self

    def update_from(self, values):
        """ Override with explicit values, skipping unset ones (None)
        """
        self.config.update({
            key: self.__coerce_value(value)
            for key, value in values.items() if value is not None
        })
        self.validate()
        return self

    def validate(self):
        if self.config.get('RADIX_OUTPUT_FORMAT') not in OUTPUT_FORMATS:
            raise ValueError('RADIX_OUTPUT_FORMAT must be one of {}'.format(
                ', '.join(OUTPUT_FORMATS)))
        for key in ('RADIX_SAMPLES', 'RADIX_WORKERS', 'RADIX_MAX_DENOMINATOR', 'RADIX_SEED'):
            if not isinstance(self.config.get(key), int) or self.config[key] < 0:
                raise ValueError('{} must be a nonnegative integer'.format(key))
        if self.config['RADIX_WORKERS'] < 1:
            raise ValueError('RADIX_WORKERS must be at least 1')

    def k_candidates(self, p):
        """ Candidate list for W(x) membership; [p] unless overridden
        """
        return parse_k_candidates(self.config.get('RADIX_K_CANDIDATES'), p)

    def get(self, *args):
        return self.config.get(*args)

    def keys(self):
        return self.config.keys()

    def __getitem__(self, key):
        return self.config.get(key)

    def __setitem__(self, key, value):
        self.config[key] = value

    def __contains__(self, key):
        return key in self.config


def parse_k_candidates(value, p):
    if value is None or value == '':
        return (p,)
    if isinstance(value, int):
        candidates = (value,)
    elif isinstance(value, str):
        candidates = tuple(int(item) for item in value.replace(' ', '').split(',') if item)
    else:
        candidates = tuple(int(item) for item in value)
    if not candidates or any(k < 1 for k in candidates):
        raise ValueError('k candidates must be positive integers')
    return candidates
