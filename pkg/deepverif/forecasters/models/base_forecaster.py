from deepverif.exceptions import (InsufficientHistory, InvalidStep,
                                  UnsupportedVariable)
from deepverif.forecasters.request import ForecastRequest
from deepverif.grid.grid_field import FieldStack


class BaseForecaster:
    """
    This class is the highest class in the forecaster hierarchy. It maps a
    history of past states (X_t, X_t-1, ...) and a lead time to the
    predicted state at that lead time.

    The class contains one abstract method, forecast(), that concrete
    forecasters implement on plain arrays. The problem-agnostic methods
    predict() and rollout() take care of validating requests, stamping
    the output with the right init and lead time, and composing
    single-step predictions into longer ones.

    This class is not intended to be used directly; inherit it, or one of
    PersistenceForecaster, ClimatologyForecaster and ToyForecaster, to
    create a new forecaster.

    Forecasters are treated as immutable while predicting, so one instance
    can serve many threads.
    """
    #: number of past states forecast() consumes
    history_length = 1
    #: variable ids the forecaster supports, None for any
    variables = None
    name = "base"

    def supports(self, variable):
        return self.variables is None or variable in self.variables

    def check_request(self, request):
        """
        Raises if the request cannot be served by this forecaster.

        :raises UnsupportedVariable: for variables outside self.variables
        :raises InsufficientHistory: for histories shorter than
            history_length
        """
        for variable in request.variables:
            if not self.supports(variable):
                raise UnsupportedVariable("{} forecaster does not support "
                                          "{!r}".format(self.name, variable))
        if len(request.history) < self.history_length:
            raise InsufficientHistory(
                "{} forecaster needs {} past states, got {}".format(
                    self.name, self.history_length, len(request.history)))

    def predict(self, request):
        """
        Predicts the state at exactly request.target_lead hours after the
        newest history state.

        :param request: ForecastRequest
        :return: FieldStack with the newest state's init time and a lead
            time advanced by target_lead
        """
        self.check_request(request)
        newest = request.newest
        values = self.forecast(request.history[:self.history_length],
                               request.target_lead)
        return FieldStack.from_array(values, newest.spec, newest.variables,
                                     newest.init_time,
                                     newest.lead_time + request.target_lead)

    def rollout(self, request, step):
        """
        Reaches target_lead by repeated predictions of `step` hours, each
        output becoming the newest state of the next request.

        :param request: ForecastRequest
        :param step: hours per prediction, must divide target_lead
        :return: FieldStack at target_lead
        :raises InvalidStep: when step does not divide target_lead, or when
            the fed-back history would not be uniformly spaced
        """
        step = int(step)
        if step < 1 or request.target_lead % step:
            raise InvalidStep("step {} h does not divide lead {} h".format(
                step, request.target_lead))
        self.check_request(request)
        if (self.history_length > 2 and request.spacing is not None
                and request.spacing != step):
            raise InvalidStep("rollout step {} h differs from the history "
                              "spacing {} h".format(step, request.spacing))

        history = request.history[:self.history_length]
        state = None
        for _ in range(request.target_lead // step):
            state = self.predict(ForecastRequest(history, step))
            history = (state,) + history[:self.history_length - 1]
        return state

    def forecast(self, history, lead):
        """
        This method should be implemented to compute the predicted values.

        :param history: tuple of FieldStacks, newest first, exactly
            history_length long
        :param lead: lead time in hours, >= 1
        :return: C x H x W array in the channel order of history[0]
        """
        raise NotImplementedError
