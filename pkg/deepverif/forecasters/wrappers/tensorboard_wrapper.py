import numpy as np
from tensorboardX import SummaryWriter


class TensorboardLogger:
    """
    Decorates a ToyTrainer and writes its training curves to TensorBoard.

    Every call to step() is forwarded to the trainer and the returned loss,
    the accepted learning rate and, if requested, the coefficients are
    logged. Attributes not defined here are looked up on the trainer.

    :param trainer: ToyTrainer, or anything with the same reset()/step()
    :param log_dir: TensorBoard log directory
    :param v_loss: > 0 logs the loss per epoch and its moving averages
    :param v_params: > 0 logs a histogram of the coefficients per epoch
    :param windows: moving-average window lengths in epochs
    """
    def __init__(self,
                 trainer,
                 log_dir="logs/training",
                 v_loss=1,
                 v_params=0,
                 windows=(10, 100)):
        self.trainer = trainer

        self.step_global = 0
        self.step_reset = 0
        self.loss_history = []

        self.v_loss = v_loss
        self.v_params = v_params
        self.windows = tuple(windows)

        self.file_writer = SummaryWriter(log_dir, flush_secs=30)

    def __getattr__(self, name):
        return getattr(self.trainer, name)

    def step(self):
        params, loss, done, info = self.trainer.step()

        if self.v_loss > 0:
            self.file_writer.add_scalar("Loss/Per Epoch", loss,
                                        self.step_global)
            self.file_writer.add_scalar("Learning Rate/Per Epoch",
                                        info["learning_rate"],
                                        self.step_global)
            self.loss_history.append(loss)
            for window in self.windows:
                if len(self.loss_history) >= window:
                    self.file_writer.add_scalar(
                        "Loss/With Window {}".format(window),
                        np.average(self.loss_history[-window:]),
                        global_step=self.step_global)

        if self.v_params > 0:
            matrix = params.as_matrix(params.variables)
            self.file_writer.add_histogram("Coefficients/Per Epoch", matrix,
                                           global_step=self.step_global)

        if done:
            self.file_writer.add_scalar("Epochs/Per Reset", info["epoch"],
                                        global_step=self.step_reset)

        self.file_writer.flush()
        self.step_global += 1
        return params, loss, done, info

    def reset(self):
        loss = self.trainer.reset()
        if self.v_loss > 0:
            self.file_writer.add_scalar("Loss/Initial Per Reset", loss,
                                        global_step=self.step_reset)
        self.file_writer.flush()

        self.step_reset += 1
        self.loss_history = []
        return loss

    def train(self, epochs):
        """
        Same as ToyTrainer.train, with every epoch going through step().
        """
        for _ in range(int(epochs)):
            _, _, done, _ = self.step()
            if done:
                break
        return self.trainer.params

    def flush(self):
        if self.file_writer is not None:
            self.file_writer.flush()

    def close(self):
        if self.file_writer is not None:
            self.file_writer.close()
