from deepverif.cli.config import RunConfig, load_config
