import threading


class Singleton:
    __instances = {}
    __lock = threading.Lock()

    def __new__(cls, *args, **kwargs):
        with Singleton.__lock:
            instance = Singleton.__instances.get(cls)
            if instance is None:
                instance = super(Singleton, cls).__new__(cls)
                Singleton.__instances[cls] = instance
        return instance

    def __init__(self):
        pass
