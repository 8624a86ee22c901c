from dataclasses import dataclass


@dataclass(frozen=True)
class ForecastRequest:
    """
    Past states and the lead time to predict.

    :param history: tuple of FieldStacks, newest first (X_t, X_t-1, ...),
        uniformly spaced in valid time, sharing spec and variables
    :param target_lead: hours ahead of the newest state, >= 1
    """
    history: tuple
    target_lead: int

    def __post_init__(self):
        history = tuple(self.history)
        object.__setattr__(self, "history", history)
        if not history:
            raise ValueError("a forecast request needs at least one state")
        if int(self.target_lead) != self.target_lead or self.target_lead < 1:
            raise ValueError("target_lead must be a whole number of hours "
                             ">= 1")
        object.__setattr__(self, "target_lead", int(self.target_lead))

        newest = history[0]
        for state in history[1:]:
            newest.same_grid(state)
        times = [state.valid_time for state in history]
        steps = {(later - earlier).total_seconds()
                 for later, earlier in zip(times, times[1:])}
        if any(step <= 0 for step in steps):
            raise ValueError("history must be ordered newest first")
        if len(steps) > 1:
            raise ValueError("history must be uniformly spaced")

    @property
    def newest(self):
        return self.history[0]

    @property
    def variables(self):
        return self.history[0].variables

    @property
    def spacing(self):
        """Hours between consecutive states, None for a single state."""
        if len(self.history) < 2:
            return None
        delta = self.history[0].valid_time - self.history[1].valid_time
        return delta.total_seconds() / 3600.0
