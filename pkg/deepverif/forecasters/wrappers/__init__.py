from deepverif.forecasters.wrappers.tensorboard_wrapper import \
    TensorboardLogger
