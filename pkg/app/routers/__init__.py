from fastapi import HTTPException, status

from app.errors import InputError, KrylovLabError


def to_http(e: KrylovLabError) -> HTTPException:
    code = status.HTTP_400_BAD_REQUEST if isinstance(e, InputError) else status.HTTP_422_UNPROCESSABLE_ENTITY
    return HTTPException(status_code=code, detail={"code": e.code, "message": str(e)})
