from deepverif.forecasters.models.base_forecaster import BaseForecaster


class PersistenceForecaster(BaseForecaster):
    """
    Predicts the newest state unchanged at every lead time, which makes it
    a fixed point of rollout().
    """
    name = "persistence"

    def forecast(self, history, lead):
        return history[0].as_array()
