from radix import configuration, specfile, tower


def create_tower_from_spec(text, config=None):
    """ Parse spec file text and validate its tower. Returns the parsed
    spec, the tower context and the merged configuration.
    """
    spec = specfile.parse_spec(text)
    config = config or configuration.ConfigManager().init_env()
    config.update_from(spec.config_values())
    ctx = tower.make_tower(spec.to_tower_spec())
    return spec, ctx, config


def create_tower(path, config=None):
    """ Same as create_tower_from_spec, reading the spec from a file
    """
    with open(path) as handle:
        return create_tower_from_spec(handle.read(), config)
